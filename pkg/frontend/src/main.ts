// DOM wiring for the rewrite-and-rescore form. State lives here; all scoring
// happens on the server.

import { ApiError, checkHealth, submitScore } from "./api.js";
import {
  FormValues,
  HistoryEntry,
  appendHistory,
  buildScoreRequest,
  formatDelta,
  formatProbability,
  historyRows,
  splitBlankLines,
  validateForm,
} from "./logic.js";

const apiBase =
  document.querySelector<HTMLMetaElement>('meta[name="api-base"]')?.content?.replace(/\/$/, "") ?? "";

let history: HistoryEntry[] = [];
let inFlight = false;
// count fields auto-fill from the textareas until the user edits them
const countsDirty = { images: false, paragraphs: false };

const el = <T extends HTMLElement>(id: string): T => {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
};

const postText = el<HTMLTextAreaElement>("post-text");
const title = el<HTMLInputElement>("title");
const description = el<HTMLTextAreaElement>("description");
const paragraphs = el<HTMLTextAreaElement>("paragraphs");
const keywords = el<HTMLInputElement>("keywords");
const captions = el<HTMLTextAreaElement>("captions");
const numImages = el<HTMLInputElement>("num-images");
const numParagraphs = el<HTMLInputElement>("num-paragraphs");
const submitButton = el<HTMLButtonElement>("submit");
const errorBox = el<HTMLDivElement>("error");
const resultBox = el<HTMLDivElement>("result");
const gaugeFill = el<HTMLDivElement>("gauge-fill");
const gaugeLabel = el<HTMLSpanElement>("gauge-label");
const labelBadge = el<HTMLSpanElement>("label-badge");
const metaLine = el<HTMLSpanElement>("meta-line");
const historyList = el<HTMLOListElement>("history");
const healthDot = el<HTMLSpanElement>("health");

function readForm(): FormValues {
  return {
    postText: postText.value,
    title: title.value,
    description: description.value,
    paragraphsText: paragraphs.value,
    keywords: keywords.value,
    captionsText: captions.value,
    numImages: numImages.value,
    numParagraphs: numParagraphs.value,
  };
}

function refreshSubmitState(): void {
  submitButton.disabled = inFlight || postText.value.trim().length === 0;
}

function showError(message: string): void {
  errorBox.textContent = message;
  errorBox.hidden = false;
}

function clearError(): void {
  errorBox.hidden = true;
  errorBox.textContent = "";
}

function renderResult(probability: number, label: string, modelType: string, latencyMs: number): void {
  resultBox.hidden = false;
  const pct = formatProbability(probability);
  gaugeFill.style.width = `${Math.round(100 * probability)}%`;
  gaugeFill.classList.toggle("high", probability >= 0.5);
  gaugeLabel.textContent = pct;
  labelBadge.textContent = label;
  labelBadge.className = `badge ${label === "clickbait" ? "badge-bait" : "badge-ok"}`;
  metaLine.textContent = `${modelType} model, ${latencyMs.toFixed(0)} ms`;
}

function renderHistory(): void {
  historyList.innerHTML = "";
  const rows = historyRows(history);
  if (rows.length === 0) {
    const item = document.createElement("li");
    item.className = "history-empty";
    item.textContent = "No submissions yet. Score a draft, rewrite it, and score again.";
    historyList.appendChild(item);
    return;
  }
  for (const row of rows) {
    const item = document.createElement("li");
    const score = document.createElement("span");
    score.className = "history-score";
    score.textContent = formatProbability(row.probability);
    const delta = document.createElement("span");
    delta.className = "history-delta";
    if (row.delta !== null) {
      delta.textContent = formatDelta(row.delta);
      delta.classList.add(row.delta > 0 ? "delta-up" : "delta-down");
    }
    const text = document.createElement("span");
    text.className = "history-text";
    text.textContent = row.postText;
    item.append(score, delta, text);
    historyList.appendChild(item);
  }
}

function autoFillCounts(): void {
  if (!countsDirty.images) {
    numImages.value = String(splitBlankLines(captions.value).length);
  }
  if (!countsDirty.paragraphs) {
    numParagraphs.value = String(splitBlankLines(paragraphs.value).length);
  }
}

async function onSubmit(event: Event): Promise<void> {
  event.preventDefault();
  const form = readForm();
  const problem = validateForm(form);
  if (problem) {
    showError(problem);
    return;
  }
  clearError();
  inFlight = true;
  refreshSubmitState();
  submitButton.textContent = "Scoring…";
  try {
    const response = await submitScore(apiBase, buildScoreRequest(form));
    renderResult(response.probability, response.label, response.modelType, response.latencyMs);
    history = appendHistory(history, {
      timestamp: Date.now(),
      postText: form.postText.trim(),
      probability: response.probability,
      label: response.label,
    });
    renderHistory();
  } catch (err) {
    showError(err instanceof ApiError ? err.message : `Unexpected error: ${String(err)}`);
  } finally {
    inFlight = false;
    submitButton.textContent = "Score it";
    refreshSubmitState();
  }
}

el<HTMLFormElement>("score-form").addEventListener("submit", onSubmit);
postText.addEventListener("input", refreshSubmitState);
captions.addEventListener("input", autoFillCounts);
paragraphs.addEventListener("input", autoFillCounts);
numImages.addEventListener("input", () => {
  countsDirty.images = true;
});
numParagraphs.addEventListener("input", () => {
  countsDirty.paragraphs = true;
});

refreshSubmitState();
autoFillCounts();
renderHistory();
void checkHealth(apiBase).then((ok) => {
  healthDot.classList.toggle("health-ok", ok);
  healthDot.title = ok ? "scoring service reachable" : "scoring service unreachable";
});
