import type { AnalysisResponse } from './types';
import { renderTwoDimensionalText, SubstituteClickHandler } from './render';

/** Newest-first list of prior analyses, each re-rendered in full so
 *  context-driven differences are visible at a glance. */
export function renderHistoryPanel(
  entries: AnalysisResponse[],
  onSubstituteClick?: SubstituteClickHandler,
): HTMLElement {
  const panel = document.createElement('section');
  panel.className = 'history-panel';

  if (entries.length === 0) {
    const empty = document.createElement('p');
    empty.className = 'history-empty';
    empty.textContent = 'No queries yet.';
    panel.appendChild(empty);
    return panel;
  }

  for (const entry of entries) {
    const item = document.createElement('article');
    item.className = 'history-entry';
    const meta = document.createElement('div');
    meta.className = 'history-meta';
    meta.textContent = `${entry.model} / ${entry.layer_mode} / n=${entry.n}` +
      (entry.timestamp ? ` / ${entry.timestamp}` : '');
    item.appendChild(meta);
    item.appendChild(renderTwoDimensionalText(entry, onSubstituteClick));
    panel.appendChild(item);
  }
  return panel;
}
