/** Single-page rating flow: one utterance per screen, no back navigation. */

import {
  ApiError,
  LIKERT_LABELS,
  adminProgress,
  nextItem,
  openSession,
  submitRating,
  type LikertLabel,
} from "./api.js";
import {
  canSubmit,
  completed,
  initialState,
  selectNaturalness,
  selectQuality,
  showItem,
  withError,
  type RatingFormState,
} from "./state.js";

const QUALITY_PROMPT =
  "Rate the overall quality of the utterance, in terms of its grammatical " +
  "correctness, fluency, adequacy and other important factors";
const NATURALNESS_PROMPT = "The utterance could have been produced by a native speaker";

export class SurveyApp {
  private state: RatingFormState = initialState();
  private sessionId = "";

  constructor(
    private readonly root: HTMLElement,
    private readonly base: string,
    private readonly raterId: string,
  ) {}

  async start(): Promise<void> {
    try {
      const session = await openSession(this.base, this.raterId);
      this.sessionId = session.session_id;
      await this.advance();
    } catch (err) {
      this.state = withError(this.state, describe(err));
      this.render();
    }
  }

  private async advance(): Promise<void> {
    const next = await nextItem(this.base, this.sessionId);
    this.state = next.done
      ? completed(this.state, next.progress)
      : showItem(this.state, next.item!, next.progress);
    this.render();
  }

  private async submit(): Promise<void> {
    if (!canSubmit(this.state)) return;
    const { item, quality, naturalness } = this.state;
    this.state = { ...this.state, busy: true };
    this.render();
    try {
      await submitRating(this.base, this.sessionId, item!.text_id, quality!, naturalness!);
      await this.advance();
    } catch (err) {
      // the rater's selections stay on screen; nothing is lost
      this.state = withError(this.state, describe(err));
      this.render();
    }
  }

  render(): void {
    this.root.replaceChildren();
    if (this.state.error && !this.state.item && !this.state.done) {
      this.root.append(banner(this.state.error));
      return;
    }
    if (this.state.done) {
      this.root.append(this.completionScreen());
      return;
    }
    if (this.state.item) {
      this.root.append(this.itemScreen());
    }
  }

  private completionScreen(): HTMLElement {
    const section = el("section", "screen completion");
    section.append(
      el("h1", "", "All done"),
      el("p", "", `Thank you! You rated ${this.state.progress.served} texts.`),
    );
    return section;
  }

  private itemScreen(): HTMLElement {
    const state = this.state;
    const section = el("section", "screen item");
    const progress = el(
      "p",
      "progress",
      `Text ${state.progress.served + 1} of ${state.progress.total}`,
    );
    const text = el("blockquote", "display-text", state.item!.display_text);

    const submit = document.createElement("button");
    submit.id = "submit";
    submit.textContent = "Submit rating";
    submit.disabled = !canSubmit(state);
    submit.addEventListener("click", () => void this.submit());

    const update = () => {
      submit.disabled = !canSubmit(this.state);
    };
    const qualityScale = this.scale("quality", QUALITY_PROMPT, state.quality, (label) => {
      this.state = selectQuality(this.state, label);
      update();
    });
    const naturalnessScale = this.scale(
      "naturalness",
      NATURALNESS_PROMPT,
      state.naturalness,
      (label) => {
        this.state = selectNaturalness(this.state, label);
        update();
      },
    );

    section.append(progress, text, qualityScale, naturalnessScale);
    if (state.error) section.append(banner(state.error));
    section.append(submit);
    return section;
  }

  private scale(
    name: string,
    prompt: string,
    selected: LikertLabel | null,
    onSelect: (label: LikertLabel) => void,
  ): HTMLElement {
    const fieldset = document.createElement("fieldset");
    fieldset.className = `scale ${name}`;
    const legend = document.createElement("legend");
    legend.textContent = prompt;
    fieldset.append(legend);
    for (const label of LIKERT_LABELS) {
      const wrapper = document.createElement("label");
      const input = document.createElement("input");
      input.type = "radio";
      input.name = name;
      input.value = label;
      input.checked = label === selected;
      input.addEventListener("change", () => onSelect(label));
      wrapper.append(input, document.createTextNode(` ${label}`));
      fieldset.append(wrapper);
    }
    return fieldset;
  }
}

/** Minimal admin view: per-text judgement counts. */
export async function renderAdmin(root: HTMLElement, base: string): Promise<void> {
  const data = await adminProgress(base);
  root.replaceChildren();
  const table = document.createElement("table");
  table.className = "admin-progress";
  const header = table.insertRow();
  header.insertCell().textContent = "text_id";
  header.insertCell().textContent = "judgements";
  for (const [textId, count] of Object.entries(data.texts)) {
    const row = table.insertRow();
    row.insertCell().textContent = textId;
    row.insertCell().textContent = String(count);
  }
  root.append(el("h1", "", "Survey progress"), table);
}

function el(tag: string, className: string, text?: string): HTMLElement {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function banner(message: string): HTMLElement {
  const node = el("div", "error-banner", message);
  node.setAttribute("role", "alert");
  return node;
}

function describe(err: unknown): string {
  if (err instanceof ApiError) {
    if (err.code === "NetworkError") return "Network problem - please retry.";
    return `${err.code}: ${err.message}`;
  }
  return String(err);
}
