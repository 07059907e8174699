// Thin client for the scoring service. The UI never computes a probability
// itself; every number it shows came back from POST /score.

import type { ScoreRequestBody, ScoreResponse } from "./logic.js";

export class ApiError extends Error {
  status: number | null;

  constructor(message: string, status: number | null = null) {
    super(message);
    this.status = status;
  }
}

function detailMessage(payload: unknown): string {
  if (payload && typeof payload === "object" && "detail" in payload) {
    const detail = (payload as { detail: unknown }).detail;
    if (typeof detail === "string") return detail;
    if (Array.isArray(detail)) {
      return detail
        .map((item) => {
          const loc = Array.isArray(item?.loc) ? item.loc.join(".") : "";
          return loc ? `${loc}: ${item?.msg ?? "invalid"}` : String(item?.msg ?? "invalid");
        })
        .join("; ");
    }
  }
  return "The server rejected the request.";
}

export async function submitScore(
  baseUrl: string,
  body: ScoreRequestBody,
  fetchImpl: typeof fetch = fetch,
): Promise<ScoreResponse> {
  let response: Response;
  try {
    response = await fetchImpl(`${baseUrl}/score`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
  } catch (err) {
    throw new ApiError(`Could not reach the scoring service: ${String(err)}`);
  }
  let payload: unknown = null;
  try {
    payload = await response.json();
  } catch {
    // fall through; error constructed from status below
  }
  if (!response.ok) {
    throw new ApiError(detailMessage(payload), response.status);
  }
  return payload as ScoreResponse;
}

export async function checkHealth(
  baseUrl: string,
  fetchImpl: typeof fetch = fetch,
): Promise<boolean> {
  try {
    const response = await fetchImpl(`${baseUrl}/health`);
    return response.ok;
  } catch {
    return false;
  }
}
