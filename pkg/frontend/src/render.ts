import type { AnalysisResponse, TierName, TokenEntry } from './types';

/** Pinned tier colors: high/mid/low = green/blue/red. */
export const TIER_COLORS: Record<TierName, string> = {
  high: '#2e7d32',
  mid: '#1565c0',
  low: '#c62828',
};

/** Font scale in em: 0.8 at similarity <= 0, 1.6 at similarity 1. */
export function fontScale(similarity: number): number {
  const clamped = Math.max(0, Math.min(1, similarity));
  return 0.8 + 0.8 * clamped;
}

function validate(result: unknown): result is AnalysisResponse {
  const r = result as AnalysisResponse;
  return (
    !!r &&
    Array.isArray(r.tokens) &&
    r.tokens.every(
      (t: TokenEntry) =>
        typeof t.surface === 'string' &&
        typeof t.functional === 'boolean' &&
        Array.isArray(t.substitutes),
    )
  );
}

export type SubstituteClickHandler = (word: string, anchor: HTMLElement) => void;

/** Lay the analysis out as two-dimensional text: the sentence runs
 *  horizontally, each token's substitutes stack vertically beneath it.
 *  Functional tokens render once, uncolored and not clickable. */
export function renderTwoDimensionalText(
  result: AnalysisResponse,
  onSubstituteClick?: SubstituteClickHandler,
): HTMLElement {
  const root = document.createElement('div');
  root.className = 'two-dimensional-text';

  if (!validate(result)) {
    const banner = document.createElement('div');
    banner.className = 'error-banner';
    banner.textContent = 'Malformed analysis response';
    root.appendChild(banner);
    return root;
  }

  for (const token of result.tokens) {
    const column = document.createElement('div');
    column.className = 'token-column';

    const head = document.createElement('div');
    head.className = `token-surface tier-${token.tier}`;
    head.textContent = token.surface;
    if (!token.functional) {
      head.style.color = TIER_COLORS[token.tier];
    }
    column.appendChild(head);

    for (const sub of token.substitutes) {
      const cell = document.createElement('span');
      cell.textContent = sub.word;
      cell.style.fontSize = `${fontScale(sub.similarity)}em`;
      if (token.functional) {
        cell.className = 'substitute functional';
      } else {
        cell.className = `substitute tier-${sub.tier}`;
        cell.style.color = TIER_COLORS[sub.tier];
        cell.setAttribute('role', 'link');
        cell.tabIndex = 0;
        if (onSubstituteClick) {
          cell.addEventListener('click', () => onSubstituteClick(sub.word, cell));
        }
      }
      const row = document.createElement('div');
      row.className = 'substitute-row';
      row.appendChild(cell);
      column.appendChild(row);
    }
    root.appendChild(column);
  }
  return root;
}
