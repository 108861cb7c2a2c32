/** Client-side state of the rating form; the server stays authoritative. */

import type { LikertLabel, Progress, SurveyItemPayload } from "./api.js";

export interface RatingFormState {
  item: SurveyItemPayload | null;
  quality: LikertLabel | null;
  naturalness: LikertLabel | null;
  progress: Progress;
  done: boolean;
  error: string | null;
  busy: boolean;
}

export function initialState(): RatingFormState {
  return {
    item: null,
    quality: null,
    naturalness: null,
    progress: { served: 0, total: 0 },
    done: false,
    error: null,
    busy: false,
  };
}

export function showItem(
  state: RatingFormState,
  item: SurveyItemPayload,
  progress: Progress,
): RatingFormState {
  return { ...state, item, progress, quality: null, naturalness: null, error: null, busy: false };
}

export function selectQuality(state: RatingFormState, label: LikertLabel): RatingFormState {
  return { ...state, quality: label };
}

export function selectNaturalness(state: RatingFormState, label: LikertLabel): RatingFormState {
  return { ...state, naturalness: label };
}

/** Submit is allowed only once both scales have a selection. */
export function canSubmit(state: RatingFormState): boolean {
  return state.item !== null && state.quality !== null && state.naturalness !== null && !state.busy;
}

export function completed(state: RatingFormState, progress: Progress): RatingFormState {
  return { ...state, item: null, done: true, progress, busy: false };
}

export function withError(state: RatingFormState, message: string): RatingFormState {
  // selections survive an error so nothing the rater chose is lost
  return { ...state, error: message, busy: false };
}
