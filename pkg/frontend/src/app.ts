/** Page wiring: one session per page, rendered from the server view
 * after every interaction.  The page never mutates engine state
 * locally — every change of picture comes from a fresh view.
 */

import { ApiError, SessionApi } from "./api.js";
import {
  buildViewModel,
  formatSet,
  parseMediatorSets,
  parseVertexName,
} from "./model.js";
import { renderGraph, toSvgString } from "./render.js";
import type { Answer, SessionView } from "./types.js";

export interface AppOptions {
  document: Document;
  root: HTMLElement;
  defaultBaseUrl?: string;
  makeApi?: (baseUrl: string) => SessionApi;
}

function escapeHtml(value: string): string {
  return value
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;");
}

export class App {
  private readonly doc: Document;
  private readonly root: HTMLElement;
  private readonly makeApi: (baseUrl: string) => SessionApi;
  private api: SessionApi | null = null;
  private sessionId: string | null = null;
  private view: SessionView | null = null;
  private inflight: Promise<void> = Promise.resolve();
  lastTranscript: string | null = null;

  constructor(options: AppOptions) {
    this.doc = options.document;
    this.root = options.root;
    this.makeApi =
      options.makeApi ?? ((baseUrl: string) => new SessionApi(baseUrl));
    this.renderSetup(options.defaultBaseUrl ?? "http://127.0.0.1:8000");
  }

  /** Resolves once every queued interaction has settled. */
  whenIdle(): Promise<void> {
    return this.inflight;
  }

  currentView(): SessionView | null {
    return this.view;
  }

  private enqueue(action: () => Promise<void>): void {
    this.inflight = this.inflight
      .then(action)
      .catch((err: unknown) => this.showError(err));
  }

  private input(id: string): HTMLInputElement {
    const node = this.doc.getElementById(id);
    if (!node) {
      throw new Error(`missing element #${id}`);
    }
    return node as HTMLInputElement;
  }

  private on(id: string, handler: () => void): void {
    const node = this.doc.getElementById(id);
    if (node) {
      node.addEventListener("click", (event) => {
        event.preventDefault();
        try {
          handler();
        } catch (err) {
          // Input parse errors: report inline, keep what was typed.
          this.showError(err);
        }
      });
    }
  }

  private showError(err: unknown): void {
    const box = this.doc.getElementById("error");
    if (!box) {
      return;
    }
    const message =
      err instanceof ApiError
        ? `server: ${err.message}`
        : err instanceof Error
          ? err.message
          : String(err);
    box.textContent = message;
  }

  // ---------------------------------------------------------------- setup

  private renderSetup(defaultBaseUrl: string): void {
    this.root.innerHTML = `
      <div id="setup"><form id="setup-form">
        <h1>confounder selection</h1>
        <label>service <input id="base-url" value="${escapeHtml(defaultBaseUrl)}"></label>
        <label>treatment <input id="x-input" value="X"></label>
        <label>outcome <input id="y-input" value="Y"></label>
        <label>search
          <select id="algorithm">
            <option value="queue">queue</option>
            <option value="recursive">recursive</option>
          </select>
        </label>
        <button id="start">start session</button>
        <p id="error" class="error" aria-live="polite"></p>
      </form></div>
      <div id="workspace" hidden></div>
    `;
    this.on("start", () => {
      this.enqueue(async () => {
        const api = this.makeApi(this.input("base-url").value);
        const view = await api.createSession({
          x: this.input("x-input").value.trim(),
          y: this.input("y-input").value.trim(),
          algorithm: (this.input("algorithm") as unknown as HTMLSelectElement)
            .value,
        });
        this.api = api;
        this.sessionId = view.session_id;
        this.renderView(view);
      });
    });
  }

  // ------------------------------------------------------------ main view

  private renderView(view: SessionView): void {
    this.view = view;
    const model = buildViewModel(view);
    // The setup form (and its error box) gives way to the workspace.
    this.doc.getElementById("setup")?.remove();
    const workspace = this.doc.getElementById("workspace");
    if (!workspace) {
      return;
    }
    (workspace as HTMLElement).hidden = false;

    const queueItems = model.queue
      .map(
        (badge) =>
          `<li>${escapeHtml(badge.set)} <span class="badge">cut ${escapeHtml(
            badge.mincut,
          )}</span></li>`,
      )
      .join("");
    const emittedItems = model.emitted
      .map((set) => `<li>${escapeHtml(formatSet(set))}</li>`)
      .join("");
    const finishedBanner = model.finished
      ? `<p id="finished-banner" class="finished">finished: ${escapeHtml(
          model.finished.reason,
        )}</p>`
      : "";

    workspace.innerHTML = `
      <div class="columns">
        <div class="main">
          <section id="question-panel">${this.questionPanelHtml(view)}</section>
          <p id="error" class="error" aria-live="polite"></p>
          <section id="graph">${toSvgString(renderGraph(model))}</section>
        </div>
        <aside class="sidebar">
          <p id="session-line">session <code>${escapeHtml(view.session_id)}</code>
            — ${escapeHtml(view.x)} vs ${escapeHtml(view.y)}</p>
          <p id="state-summary">conditioning on ${escapeHtml(
            formatSet(model.conditioned),
          )} <span class="badge">cut ${escapeHtml(model.mincut)}</span></p>
          <h2>queue</h2>
          <ul id="queue-list">${queueItems}</ul>
          <h2>sufficient sets</h2>
          <ul id="emitted-list">${emittedItems}</ul>
          ${finishedBanner}
          <p>
            <button id="refresh">refresh</button>
            <button id="download">download transcript</button>
            <button id="abort">abort</button>
          </p>
        </aside>
      </div>
    `;

    this.on("refresh", () => this.enqueue(() => this.refresh()));
    this.on("abort", () => {
      this.enqueue(async () => {
        const view = await this.requireApi().abort(this.requireSession());
        this.renderView(view);
      });
    });
    this.on("download", () => {
      this.enqueue(async () => {
        const text = await this.requireApi().getTranscript(
          this.requireSession(),
        );
        this.lastTranscript = text;
        const link = this.doc.createElement("a");
        link.href =
          "data:application/x-ndjson;charset=utf-8," + encodeURIComponent(text);
        link.download = `session-${this.sessionId}.jsonl`;
        link.click();
      });
    });
    this.bindQuestionHandlers(view);
  }

  private questionPanelHtml(view: SessionView): string {
    const pending = view.pending_query;
    if (!pending) {
      return `<p id="question-text">no more questions.</p>`;
    }
    const question = `<p id="question-text">${escapeHtml(pending.question)}</p>`;
    switch (pending.query.kind) {
      case "common_cause":
        return `${question}
          <input id="vertex-input" placeholder="vertex name" autocomplete="off">
          <button id="submit-vertex">that's the common cause</button>
          <button id="no-common-cause">no common cause</button>
          <button id="unblockable">yes, but nothing observable blocks it</button>`;
      case "is_observed":
        return `${question}
          <button id="answer-yes">yes</button>
          <button id="answer-no">no</button>`;
      case "find_mediator":
        return `${question}
          <input id="mediator-input" placeholder="{A,B}; {C}" autocomplete="off">
          <button id="submit-mediators">these mediate</button>
          <button id="no-mediators">nothing mediates</button>`;
    }
  }

  private bindQuestionHandlers(view: SessionView): void {
    const pending = view.pending_query;
    if (!pending) {
      return;
    }
    const submit = (answer: Answer) => {
      this.enqueue(async () => {
        const next = await this.requireApi().postAnswer(
          this.requireSession(),
          pending.query_id,
          answer,
        );
        this.renderView(next);
      });
    };
    switch (pending.query.kind) {
      case "common_cause":
        this.on("submit-vertex", () =>
          submit({
            kind: "common_cause",
            vertex: parseVertexName(this.input("vertex-input").value),
            unblockable: false,
          }),
        );
        this.on("no-common-cause", () =>
          submit({ kind: "common_cause", vertex: null, unblockable: false }),
        );
        this.on("unblockable", () =>
          submit({ kind: "common_cause", vertex: null, unblockable: true }),
        );
        break;
      case "is_observed":
        this.on("answer-yes", () =>
          submit({ kind: "is_observed", observed: true }),
        );
        this.on("answer-no", () =>
          submit({ kind: "is_observed", observed: false }),
        );
        break;
      case "find_mediator":
        this.on("submit-mediators", () =>
          submit({
            kind: "find_mediator",
            sets: parseMediatorSets(this.input("mediator-input").value),
          }),
        );
        this.on("no-mediators", () =>
          submit({ kind: "find_mediator", sets: [] }),
        );
        break;
    }
  }

  private async refresh(): Promise<void> {
    const view = await this.requireApi().getView(this.requireSession());
    this.renderView(view);
  }

  private requireApi(): SessionApi {
    if (!this.api) {
      throw new Error("no session yet");
    }
    return this.api;
  }

  private requireSession(): string {
    if (!this.sessionId) {
      throw new Error("no session yet");
    }
    return this.sessionId;
  }
}

export function mountApp(options: AppOptions): App {
  return new App(options);
}
