/** Annotation session UI: resume-or-create, item screen with 1-5 scoring,
 * keyboard shortcuts, retry-after-network-failure, completion summary.
 *
 * Every advance waits for the server's acknowledgment; nothing is
 * optimistic. The expected final frame renders only when the server
 * chooses to expose its URL.
 */
import { ApiClient, ApiError, NetworkError, NextItem, SessionSummary } from "./api.js";

const STORAGE_KEY = "vidreason.annotator";

type Screen = "login" | "item" | "done";

export class AnnotationApp {
  private screen: Screen = "login";
  private session: SessionSummary | null = null;
  private item: NextItem | null = null;
  private selectedScore: number | null = null;
  private note = "";
  private loginError = "";
  private retryMessage = "";
  private retryAction: (() => Promise<void>) | null = null;
  private busy = false;
  private readonly keyHandler = (event: KeyboardEvent) => this.onKey(event);

  constructor(
    private readonly root: HTMLElement,
    private readonly api: ApiClient,
    private readonly storage: Pick<Storage, "getItem" | "setItem" | "removeItem">,
  ) {
    this.root.ownerDocument.addEventListener("keydown", this.keyHandler);
  }

  destroy(): void {
    this.root.ownerDocument.removeEventListener("keydown", this.keyHandler);
    this.root.innerHTML = "";
  }

  /** Entry point: resume the stored annotator's session, else show login. */
  async start(): Promise<void> {
    const stored = this.storage.getItem(STORAGE_KEY);
    if (stored) {
      await this.login(stored);
    } else {
      this.render();
    }
  }

  async login(annotatorId: string): Promise<void> {
    const id = annotatorId.trim();
    if (!id) {
      this.loginError = "annotator id must be non-empty";
      this.render();
      return;
    }
    await this.guarded(async () => {
      this.session = await this.api.createSession(id);
      this.storage.setItem(STORAGE_KEY, id);
      this.loginError = "";
      await this.fetchNext();
    });
  }

  logout(): void {
    this.storage.removeItem(STORAGE_KEY);
    this.session = null;
    this.item = null;
    this.screen = "login";
    this.render();
  }

  selectScore(score: number): void {
    if (this.screen !== "item" || this.busy) {
      return;
    }
    if (score >= 1 && score <= 5) {
      this.selectedScore = score;
      this.render();
    }
  }

  async submit(): Promise<void> {
    if (this.screen !== "item" || this.selectedScore === null || this.busy) {
      return;
    }
    const { session, item, selectedScore } = this;
    if (!session || !item || item.index === undefined) {
      return;
    }
    await this.guarded(async () => {
      try {
        await this.api.submitScore(session.session_id, item.index!, selectedScore, this.note);
      } catch (err) {
        if (err instanceof ApiError && err.status === 409) {
          // already recorded (e.g. a resumed double-click); just advance
        } else {
          throw err;
        }
      }
      await this.fetchNext();
    });
  }

  async retry(): Promise<void> {
    const action = this.retryAction;
    if (!action || this.busy) {
      return;
    }
    this.retryMessage = "";
    this.retryAction = null;
    await this.guarded(action);
  }

  // -- internals -------------------------------------------------------------

  private async fetchNext(): Promise<void> {
    const session = this.session;
    if (!session) {
      return;
    }
    const item = await this.api.nextItem(session.session_id);
    this.item = item;
    this.selectedScore = null;
    this.note = "";
    this.screen = item.done ? "done" : "item";
    if (item.cursor !== undefined) {
      this.session = { ...session, cursor: item.cursor };
    } else if (item.index !== undefined) {
      this.session = { ...session, cursor: item.index };
    }
  }

  /** Run an action; on network failure show the retry banner (selection
   * kept), on a server verdict surface its message. */
  private async guarded(action: () => Promise<void>): Promise<void> {
    this.busy = true;
    this.render();
    try {
      await action();
      this.retryMessage = "";
      this.retryAction = null;
    } catch (err) {
      if (err instanceof NetworkError) {
        this.retryMessage = `network failure: ${err.message}. Nothing was lost; retry when ready.`;
        this.retryAction = action;
      } else if (err instanceof ApiError && err.status === 404 && this.screen !== "login") {
        this.loginError = `session no longer exists (${err.message}); start again`;
        this.storage.removeItem(STORAGE_KEY);
        this.session = null;
        this.screen = "login";
      } else if (err instanceof ApiError) {
        if (this.screen === "login") {
          this.loginError = err.message;
        } else {
          this.retryMessage = err.message;
          this.retryAction = null;
        }
      } else {
        throw err;
      }
    } finally {
      this.busy = false;
      this.render();
    }
  }

  private onKey(event: KeyboardEvent): void {
    const target = event.target as HTMLElement | null;
    if (target && (target.tagName === "INPUT" || target.tagName === "TEXTAREA")) {
      return;
    }
    if (event.ctrlKey || event.metaKey || event.altKey) {
      return;
    }
    const digit = /^(?:Digit|Numpad)([1-5])$/.exec(event.code);
    if (digit) {
      this.selectScore(Number(digit[1]));
    } else if (event.code === "Enter" && this.screen === "item" && this.selectedScore !== null) {
      void this.submit();
    }
  }

  // -- rendering ----------------------------------------------------------------

  private render(): void {
    const doc = this.root.ownerDocument;
    this.root.innerHTML = "";
    if (this.retryMessage) {
      const banner = doc.createElement("div");
      banner.id = "retry-banner";
      banner.className = "banner";
      const text = doc.createElement("span");
      text.textContent = this.retryMessage;
      banner.appendChild(text);
      if (this.retryAction) {
        const btn = doc.createElement("button");
        btn.id = "retry-btn";
        btn.textContent = "Retry";
        btn.addEventListener("click", () => void this.retry());
        banner.appendChild(btn);
      }
      this.root.appendChild(banner);
    }
    if (this.screen === "login") {
      this.renderLogin(doc);
    } else if (this.screen === "item") {
      this.renderItem(doc);
    } else {
      this.renderDone(doc);
    }
  }

  private renderLogin(doc: Document): void {
    const box = doc.createElement("div");
    box.id = "login-screen";
    box.innerHTML = `
      <h1>Video annotation</h1>
      <p>Enter your annotator id. An interrupted session resumes where it stopped.</p>
      <input id="annotator-input" placeholder="annotator id" />
      <button id="start-btn">Start</button>
      <p id="login-error" class="error"></p>
    `;
    this.root.appendChild(box);
    const input = box.querySelector<HTMLInputElement>("#annotator-input")!;
    const button = box.querySelector<HTMLButtonElement>("#start-btn")!;
    button.addEventListener("click", () => void this.login(input.value));
    input.addEventListener("keydown", (e) => {
      if (e.code === "Enter") {
        void this.login(input.value);
      }
    });
    box.querySelector("#login-error")!.textContent = this.loginError;
  }

  private renderItem(doc: Document): void {
    const session = this.session!;
    const item = this.item!;
    const box = doc.createElement("div");
    box.id = "item-screen";
    const human = (item.index ?? 0) + 1;
    const expected = item.expected_final_url
      ? `<figure><img id="expected-final" src="${this.api.mediaUrl(item.expected_final_url)}" alt="expected final frame" /><figcaption>expected result</figcaption></figure>`
      : "";
    box.innerHTML = `
      <header>
        <span id="progress-label">Item ${human} / ${item.total ?? session.total}</span>
        <span id="annotator-label">${session.annotator_id}</span>
        <button id="logout-btn">Switch annotator</button>
      </header>
      <p id="prompt-text"></p>
      <div class="media">
        <figure><img id="first-frame" alt="first frame" /><figcaption>first frame</figcaption></figure>
        ${expected}
        <figure><video id="video" controls></video><figcaption>generated video</figcaption></figure>
      </div>
      <div id="score-row" role="radiogroup" aria-label="score"></div>
      <input id="note-input" placeholder="optional note" />
      <button id="submit-btn">Submit score</button>
      <p class="hint">keys 1-5 select a score, Enter submits</p>
    `;
    this.root.appendChild(box);
    box.querySelector<HTMLElement>("#prompt-text")!.textContent = item.prompt ?? "";
    box.querySelector<HTMLImageElement>("#first-frame")!.src = this.api.mediaUrl(item.first_frame_url ?? "");
    box.querySelector<HTMLVideoElement>("#video")!.src = this.api.mediaUrl(item.video_url ?? "");
    const row = box.querySelector<HTMLElement>("#score-row")!;
    for (let score = 1; score <= 5; score++) {
      const btn = doc.createElement("button");
      btn.className = "score-btn" + (this.selectedScore === score ? " selected" : "");
      btn.dataset.score = String(score);
      btn.textContent = String(score);
      btn.setAttribute("role", "radio");
      btn.setAttribute("aria-checked", this.selectedScore === score ? "true" : "false");
      btn.addEventListener("click", () => this.selectScore(score));
      row.appendChild(btn);
    }
    const note = box.querySelector<HTMLInputElement>("#note-input")!;
    note.value = this.note;
    note.addEventListener("input", () => {
      this.note = note.value;
    });
    const submit = box.querySelector<HTMLButtonElement>("#submit-btn")!;
    submit.disabled = this.selectedScore === null || this.busy;
    submit.addEventListener("click", () => void this.submit());
    box.querySelector<HTMLButtonElement>("#logout-btn")!.addEventListener("click", () => this.logout());
  }

  private renderDone(doc: Document): void {
    const session = this.session!;
    const box = doc.createElement("div");
    box.id = "done-screen";
    box.innerHTML = `
      <h1>Session complete</h1>
      <p id="done-summary">All ${session.total} items scored. Thank you, ${session.annotator_id}.</p>
      <p><a id="export-link" href="${this.api.mediaUrl("/api/export")}">Download all scores (JSONL)</a></p>
      <button id="logout-btn">Switch annotator</button>
    `;
    this.root.appendChild(box);
    box.querySelector<HTMLButtonElement>("#logout-btn")!.addEventListener("click", () => this.logout());
  }

  // test hooks
  get currentScreen(): Screen {
    return this.screen;
  }

  get currentItemIndex(): number | undefined {
    return this.item?.index;
  }

  get currentSelection(): number | null {
    return this.selectedScore;
  }
}
