/** Typed client for the survey service HTTP endpoints. */

export const LIKERT_LABELS = [
  "very bad",
  "bad",
  "neutral",
  "good",
  "very good",
] as const;

export type LikertLabel = (typeof LIKERT_LABELS)[number];

export interface SurveyItemPayload {
  text_id: string;
  display_text: string;
}

export interface Progress {
  served: number;
  total: number;
}

export interface NextResponse {
  done: boolean;
  item?: SurveyItemPayload;
  progress: Progress;
}

export interface SessionResponse {
  session_id: string;
  package_id: string;
}

export interface AdminProgress {
  texts: Record<string, number>;
}

export class ApiError extends Error {
  constructor(
    public readonly code: string,
    message: string,
    public readonly status: number,
  ) {
    super(message);
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  let response: Response;
  try {
    response = await fetch(url, init);
  } catch (err) {
    throw new ApiError("NetworkError", String(err), 0);
  }
  const body = await response.json();
  if (!response.ok) {
    throw new ApiError(body.error ?? "Error", body.message ?? "request failed", response.status);
  }
  return body as T;
}

export function openSession(base: string, raterId: string): Promise<SessionResponse> {
  return request<SessionResponse>(`${base}/session`, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify({ rater_id: raterId }),
  });
}

export function nextItem(base: string, sessionId: string): Promise<NextResponse> {
  return request<NextResponse>(`${base}/session/${sessionId}/next`);
}

export function submitRating(
  base: string,
  sessionId: string,
  textId: string,
  quality: LikertLabel,
  naturalness: LikertLabel,
): Promise<{ ok: boolean; sequence_index: number }> {
  return request(`${base}/session/${sessionId}/rating`, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify({ text_id: textId, quality, naturalness }),
  });
}

export function adminProgress(base: string): Promise<AdminProgress> {
  return request<AdminProgress>(`${base}/admin/progress`);
}
