export type TierName = 'high' | 'mid' | 'low';
export type LayerModeName = 'top' | 'average';

export interface SubstituteEntry {
  word: string;
  similarity: number;
  tier: TierName;
}

export interface TokenEntry {
  surface: string;
  pos: string;
  functional: boolean;
  tier: TierName;
  substitutes: SubstituteEntry[];
}

export interface AnalysisResponse {
  model: string;
  layer_mode: LayerModeName;
  n: number;
  tokens: TokenEntry[];
  timestamp?: string;
}

export interface ModelInfo {
  id: string;
  display_name: string;
  language: string;
  layer_modes: LayerModeName[];
  dim: number;
  default: boolean;
  default_n: number;
}

export interface NeighborEntry {
  word: string;
  similarity: number;
  tier: TierName;
}

export interface NeighborsResponse {
  model: string;
  word: string;
  tier: TierName;
  frequency: number | null;
  neighbors: NeighborEntry[];
}
