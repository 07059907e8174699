// Pure form logic: request building, validation, and the rewrite history.
// Everything here is DOM-free so it can be unit tested under node.

export interface ScoreRequestBody {
  postText: string;
  targetTitle: string;
  targetDescription: string;
  targetParagraphs: string[];
  targetKeywords: string;
  targetCaptions: string[];
  numImages?: number;
  numParagraphs?: number;
}

export interface ScoreResponse {
  probability: number;
  label: string;
  modelType: string;
  latencyMs: number;
}

export interface FormValues {
  postText: string;
  title: string;
  description: string;
  paragraphsText: string; // textarea, paragraphs separated by blank lines
  keywords: string; // comma separated, sent as one string
  captionsText: string; // textarea, captions separated by blank lines
  numImages: string; // raw input values; empty string means "auto"
  numParagraphs: string;
}

export interface HistoryEntry {
  timestamp: number;
  postText: string;
  probability: number;
  label: string;
}

export interface HistoryRow extends HistoryEntry {
  delta: number | null; // vs the chronologically previous entry
}

/** Split a textarea into array entries on blank lines, trimming each block. */
export function splitBlankLines(text: string): string[] {
  return text
    .split(/\n\s*\n/)
    .map((block) => block.trim())
    .filter((block) => block.length > 0);
}

/** Error message for an unsubmittable form, or null when it can go out. */
export function validateForm(form: FormValues): string | null {
  if (form.postText.trim().length === 0) {
    return "Post text is required.";
  }
  for (const [field, label] of [
    [form.numImages, "pictures/captions count"],
    [form.numParagraphs, "paragraph count"],
  ] as const) {
    if (field.trim() !== "") {
      const n = Number(field);
      if (!Number.isInteger(n) || n < 0) {
        return `The ${label} must be a non-negative whole number.`;
      }
    }
  }
  return null;
}

/**
 * Build the request body the scoring API documents. Counts left blank
 * auto-fill from the array lengths; explicit values win.
 */
export function buildScoreRequest(form: FormValues): ScoreRequestBody {
  const paragraphs = splitBlankLines(form.paragraphsText);
  const captions = splitBlankLines(form.captionsText);
  const body: ScoreRequestBody = {
    postText: form.postText.trim(),
    targetTitle: form.title.trim(),
    targetDescription: form.description.trim(),
    targetParagraphs: paragraphs,
    targetKeywords: form.keywords.trim(),
    targetCaptions: captions,
  };
  if (form.numImages.trim() !== "") {
    body.numImages = Number(form.numImages);
  }
  if (form.numParagraphs.trim() !== "") {
    body.numParagraphs = Number(form.numParagraphs);
  }
  return body;
}

/** Append-only within a session; returns a new array. */
export function appendHistory(history: HistoryEntry[], entry: HistoryEntry): HistoryEntry[] {
  return [...history, entry];
}

/** Newest-first rows, each carrying its delta versus the previous entry. */
export function historyRows(history: HistoryEntry[]): HistoryRow[] {
  const rows: HistoryRow[] = history.map((entry, i) => ({
    ...entry,
    delta: i === 0 ? null : entry.probability - history[i - 1].probability,
  }));
  rows.reverse();
  return rows;
}

export function formatProbability(p: number): string {
  return `${(100 * p).toFixed(1)}%`;
}

export function formatDelta(delta: number): string {
  const sign = delta >= 0 ? "+" : "−";
  return `${sign}${(100 * Math.abs(delta)).toFixed(1)}pp`;
}
