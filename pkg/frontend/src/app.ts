import { ApiClient } from './api';
import { renderHistoryPanel } from './history';
import { NeighborPopover } from './popover';
import { renderTwoDimensionalText } from './render';
import type { ModelInfo } from './types';

/** Wires the query form, model/layer/n selectors, result pane and history
 *  panel together. At most one substitutes request is in flight: the
 *  submit button is disabled while waiting. */
export class App {
  private models: ModelInfo[] = [];
  private popover: NeighborPopover;

  constructor(
    private api: ApiClient,
    private root: HTMLElement,
  ) {
    this.popover = new NeighborPopover(api, root);
  }

  private el<T extends HTMLElement>(selector: string): T {
    const found = this.root.querySelector<T>(selector);
    if (!found) throw new Error(`missing element ${selector}`);
    return found;
  }

  async start(): Promise<void> {
    this.root.innerHTML = `
      <form class="query-form">
        <input name="sentence" type="text" placeholder="Enter a sentence" required>
        <select name="model"></select>
        <select name="layer_mode"></select>
        <input name="n" type="number" min="1" max="50" value="5">
        <button type="submit">Analyze</button>
      </form>
      <div class="result-pane"></div>
      <h2>History</h2>
      <div class="history-pane"></div>
    `;
    this.models = await this.api.models();
    const modelSelect = this.el<HTMLSelectElement>('select[name=model]');
    for (const m of this.models) {
      const opt = document.createElement('option');
      opt.value = m.id;
      opt.textContent = m.display_name;
      opt.selected = m.default;
      modelSelect.appendChild(opt);
    }
    modelSelect.addEventListener('change', () => this.syncLayerModes());
    this.syncLayerModes();

    this.el<HTMLFormElement>('form').addEventListener('submit', (ev) => {
      ev.preventDefault();
      void this.submit();
    });
    await this.refreshHistory();
  }

  /** The layer selector only offers modes the selected model actually has. */
  syncLayerModes(): void {
    const modelSelect = this.el<HTMLSelectElement>('select[name=model]');
    const layerSelect = this.el<HTMLSelectElement>('select[name=layer_mode]');
    const model = this.models.find((m) => m.id === modelSelect.value);
    layerSelect.innerHTML = '';
    for (const mode of model?.layer_modes ?? []) {
      const opt = document.createElement('option');
      opt.value = mode;
      opt.textContent = mode;
      layerSelect.appendChild(opt);
    }
    const nInput = this.el<HTMLInputElement>('input[name=n]');
    if (model) nInput.value = String(model.default_n);
  }

  async submit(): Promise<void> {
    const button = this.el<HTMLButtonElement>('button[type=submit]');
    if (button.disabled) return;
    button.disabled = true;
    const pane = this.el<HTMLDivElement>('.result-pane');
    try {
      const result = await this.api.substitutes(
        this.el<HTMLInputElement>('input[name=sentence]').value,
        this.el<HTMLSelectElement>('select[name=model]').value,
        this.el<HTMLSelectElement>('select[name=layer_mode]').value,
        Number(this.el<HTMLInputElement>('input[name=n]').value),
      );
      pane.innerHTML = '';
      pane.appendChild(
        renderTwoDimensionalText(result, (w, a) => void this.popover.open(w, a)),
      );
      await this.refreshHistory();
    } catch (err) {
      pane.innerHTML = '';
      const banner = document.createElement('div');
      banner.className = 'error-banner';
      banner.textContent = (err as Error).message;
      pane.appendChild(banner);
    } finally {
      button.disabled = false;
    }
  }

  async refreshHistory(): Promise<void> {
    const pane = this.el<HTMLDivElement>('.history-pane');
    const entries = await this.api.history();
    pane.innerHTML = '';
    pane.appendChild(
      renderHistoryPanel(entries, (w, a) => void this.popover.open(w, a)),
    );
  }
}

export function boot(apiBaseUrl = ''): void {
  const root = document.getElementById('app');
  if (!root) throw new Error('missing #app element');
  void new App(new ApiClient(apiBaseUrl), root).start();
}
