import type { AnalysisResponse } from '../src/types';

/** Five fixed response bodies matching the /substitutes schema. */
export const FIXTURES: Record<string, AnalysisResponse> = {
  singleContentWord: {
    model: 'en',
    layer_mode: 'top',
    n: 3,
    tokens: [
      {
        surface: 'cat',
        pos: 'NOUN',
        functional: false,
        tier: 'high',
        substitutes: [
          { word: 'cat', similarity: 1.0, tier: 'high' },
          { word: 'dog', similarity: 0.52, tier: 'mid' },
          { word: 'ferret', similarity: 0.31, tier: 'low' },
        ],
      },
    ],
  },
  functionalOnly: {
    model: 'en',
    layer_mode: 'top',
    n: 5,
    tokens: [
      {
        surface: 'the',
        pos: 'DET',
        functional: true,
        tier: 'high',
        substitutes: [{ word: 'the', similarity: 1.0, tier: 'high' }],
      },
      {
        surface: '.',
        pos: 'PUNCT',
        functional: true,
        tier: 'low',
        substitutes: [{ word: '.', similarity: 1.0, tier: 'low' }],
      },
    ],
  },
  mixedSentence: {
    model: 'en',
    layer_mode: 'average',
    n: 2,
    tokens: [
      {
        surface: 'She',
        pos: 'PRON',
        functional: true,
        tier: 'high',
        substitutes: [{ word: 'She', similarity: 1.0, tier: 'high' }],
      },
      {
        surface: 'sells',
        pos: 'VERB',
        functional: false,
        tier: 'mid',
        substitutes: [
          { word: 'buys', similarity: 0.74, tier: 'mid' },
          { word: 'trades', similarity: 0.6, tier: 'low' },
        ],
      },
      {
        surface: 'shells',
        pos: 'NOUN',
        functional: false,
        tier: 'low',
        substitutes: [
          { word: 'stones', similarity: 0.88, tier: 'mid' },
          { word: 'pearls', similarity: 0.41, tier: 'low' },
        ],
      },
    ],
  },
  similarityEndpoints: {
    model: 'en',
    layer_mode: 'top',
    n: 3,
    tokens: [
      {
        surface: 'probe',
        pos: 'NOUN',
        functional: false,
        tier: 'mid',
        substitutes: [
          { word: 'max', similarity: 1.0, tier: 'high' },
          { word: 'zero', similarity: 0.0, tier: 'mid' },
          { word: 'negative', similarity: -0.4, tier: 'low' },
        ],
      },
    ],
  },
  emptySubstitutes: {
    model: 'en',
    layer_mode: 'top',
    n: 5,
    tokens: [
      {
        surface: 'rareword',
        pos: 'NOUN',
        functional: false,
        tier: 'low',
        substitutes: [],
      },
      {
        surface: 'and',
        pos: 'CCONJ',
        functional: true,
        tier: 'high',
        substitutes: [{ word: 'and', similarity: 1.0, tier: 'high' }],
      },
    ],
  },
};
