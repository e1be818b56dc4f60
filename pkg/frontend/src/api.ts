import type { AnalysisResponse, ModelInfo, NeighborsResponse } from './types';

/** Thin client for the /api/v1 endpoints; base URL is configurable so the
 *  static bundle can be served separately from the engine. */
export class ApiClient {
  constructor(private baseUrl: string = '') {}

  private url(path: string): string {
    return `${this.baseUrl}/api/v1${path}`;
  }

  async models(): Promise<ModelInfo[]> {
    const res = await fetch(this.url('/models'));
    if (!res.ok) throw new Error(`models: HTTP ${res.status}`);
    return (await res.json()).models;
  }

  async substitutes(
    sentence: string,
    model?: string,
    layerMode?: string,
    n?: number,
  ): Promise<AnalysisResponse> {
    const res = await fetch(this.url('/substitutes'), {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify({ sentence, model, layer_mode: layerMode, n }),
    });
    if (!res.ok) {
      const detail = await res.text();
      throw new Error(`substitutes: HTTP ${res.status} ${detail}`);
    }
    return res.json();
  }

  async neighbors(word: string, model?: string, topn = 10): Promise<NeighborsResponse> {
    const params = new URLSearchParams({ word, topn: String(topn) });
    if (model) params.set('model', model);
    const res = await fetch(this.url(`/neighbors?${params}`));
    if (!res.ok) throw new Error(`neighbors: HTTP ${res.status}`);
    return res.json();
  }

  async history(limit = 10): Promise<AnalysisResponse[]> {
    const res = await fetch(this.url(`/history?limit=${limit}`));
    if (!res.ok) throw new Error(`history: HTTP ${res.status}`);
    return (await res.json()).history;
  }
}
