import type { ApiClient } from './api';
import { TIER_COLORS } from './render';

/** Nearest-neighbor popover: click a substitute to see its own semantic
 *  neighborhood; click a neighbor to explore onward. One popover at a
 *  time, one request in flight at a time. */
export class NeighborPopover {
  private element: HTMLElement | null = null;
  private inFlight = false;

  constructor(
    private api: ApiClient,
    private container: HTMLElement,
    private model?: string,
  ) {}

  async open(word: string, anchor: HTMLElement): Promise<void> {
    if (this.inFlight) return; // debounce: replace only after current settles
    this.close();
    this.inFlight = true;

    const pop = document.createElement('div');
    pop.className = 'neighbor-popover';
    pop.textContent = `Loading neighbors of "${word}"...`;
    this.container.appendChild(pop);
    this.element = pop;

    try {
      const data = await this.api.neighbors(word, this.model);
      pop.textContent = '';
      const title = document.createElement('div');
      title.className = 'popover-title';
      title.textContent = `${data.word} (${data.tier})`;
      pop.appendChild(title);
      const list = document.createElement('ul');
      for (const nb of data.neighbors) {
        const item = document.createElement('li');
        const link = document.createElement('span');
        link.className = `neighbor tier-${nb.tier}`;
        link.style.color = TIER_COLORS[nb.tier];
        link.textContent = `${nb.word} ${nb.similarity.toFixed(3)}`;
        link.addEventListener('click', () => void this.open(nb.word, link));
        item.appendChild(link);
        list.appendChild(item);
      }
      pop.appendChild(list);
    } catch (err) {
      pop.textContent = `Could not load neighbors: ${(err as Error).message}`;
      pop.classList.add('popover-error');
    } finally {
      this.inFlight = false;
    }
  }

  close(): void {
    if (this.element) {
      this.element.remove();
      this.element = null;
    }
  }
}
