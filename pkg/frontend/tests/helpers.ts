import { JSDOM } from "jsdom";
import type { DOMWindow } from "jsdom";
import {
  CurationApi,
  Entry,
  EntryEnvelope,
  ListParams,
  Listing,
  PendingList,
  SearchHit,
  SearchResult,
  Session,
  Stats,
  SubmitResult,
} from "../src/api";
import { App, createApp } from "../src/app";

let nextId = 1;

export function entry(overrides: Partial<Entry> = {}): Entry {
  const id = overrides.id ?? nextId++;
  return {
    text: "Radi kao konj",
    stem_key: "ka konj rad",
    status: "approved",
    origin: "manual",
    provenance: {},
    classifier_score: null,
    created_at: 1000 + id,
    updated_at: 1000 + id,
    ...overrides,
    id,
  };
}

export function listing(items: Entry[], overrides: Partial<Listing> = {}): Listing {
  return { items, page: 1, page_size: 50, total: items.length, ...overrides };
}

export function hit(e: Entry, similarity: number): SearchHit {
  return { entry: e, similarity };
}

export interface Call {
  method: string;
  args: unknown[];
}

/**
 * Programmable stand-in for the HTTP client. Each endpoint has a handler
 * field tests overwrite; every invocation is recorded so tests can assert
 * exactly which requests the views issued.
 */
export class StubApi implements CurationApi {
  calls: Call[] = [];
  token: string | null = null;

  onLogin: (password: string) => Session | Promise<Session> = () => ({
    token: "stub-token",
    expires_at: 9e9,
  });
  onList: (params?: ListParams) => Listing | Promise<Listing> = () => listing([]);
  onSearch: (q: string) => SearchResult | Promise<SearchResult> = (q) => ({
    query: q,
    results: [],
  });
  onSubmit: (text: string, note?: string) => SubmitResult | Promise<SubmitResult> = (
    text,
  ) => {
    const created = entry({ text, status: "pending" });
    return { entry_id: created.id, entry: created, similar: [] };
  };
  onApprove: (id: number) => EntryEnvelope | Promise<EntryEnvelope> = (id) => ({
    entry: entry({ id, status: "approved" }),
  });
  onReject: (id: number) => EntryEnvelope | Promise<EntryEnvelope> = (id) => ({
    entry: entry({ id, status: "rejected" }),
  });
  onReopen: (id: number) => EntryEnvelope | Promise<EntryEnvelope> = (id) => ({
    entry: entry({ id, status: "pending" }),
  });
  onEdit: (id: number, text: string) => EntryEnvelope | Promise<EntryEnvelope> = (
    id,
    text,
  ) => ({ entry: entry({ id, text, status: "pending" }) });
  onPending: () => PendingList | Promise<PendingList> = () => ({ items: [], total: 0 });
  onStats: () => Stats | Promise<Stats> = () => ({
    total: 0,
    by_status: {},
    by_origin: {},
    approved: 0,
    seed_mined_overlap: 0,
  });

  private record(method: string, ...args: unknown[]): void {
    this.calls.push({ method, args });
  }

  callsTo(method: string): Call[] {
    return this.calls.filter((call) => call.method === method);
  }

  hasToken(): boolean {
    return this.token !== null;
  }

  logout(): void {
    this.token = null;
  }

  async login(password: string): Promise<Session> {
    this.record("login", password);
    const session = await this.onLogin(password);
    this.token = session.token;
    return session;
  }

  async listSimiles(params?: ListParams): Promise<Listing> {
    this.record("listSimiles", params);
    return this.onList(params);
  }

  async search(q: string): Promise<SearchResult> {
    this.record("search", q);
    return this.onSearch(q);
  }

  async submit(text: string, note?: string): Promise<SubmitResult> {
    this.record("submit", text, note);
    return this.onSubmit(text, note);
  }

  async approve(id: number): Promise<EntryEnvelope> {
    this.record("approve", id);
    return this.onApprove(id);
  }

  async reject(id: number): Promise<EntryEnvelope> {
    this.record("reject", id);
    return this.onReject(id);
  }

  async reopen(id: number): Promise<EntryEnvelope> {
    this.record("reopen", id);
    return this.onReopen(id);
  }

  async edit(id: number, text: string): Promise<EntryEnvelope> {
    this.record("edit", id, text);
    return this.onEdit(id, text);
  }

  async pending(): Promise<PendingList> {
    this.record("pending");
    return this.onPending();
  }

  async stats(): Promise<Stats> {
    this.record("stats");
    return this.onStats();
  }
}

export interface Mounted {
  app: App;
  root: HTMLElement;
  doc: Document;
  win: DOMWindow;
}

export function mount(api: CurationApi): Mounted {
  // a real origin keeps jsdom's storage available to the test reporter
  const dom = new JSDOM('<!doctype html><html><body><div id="root"></div></body></html>', {
    url: "http://localhost/",
  });
  const doc = dom.window.document;
  const root = doc.getElementById("root") as HTMLElement;
  const app = createApp(root, api);
  return { app, root, doc, win: dom.window };
}

export function q(scope: ParentNode, testId: string): HTMLElement {
  const node = scope.querySelector(`[data-testid="${testId}"]`);
  if (node === null) {
    throw new Error(`no element with data-testid=${testId}`);
  }
  return node as HTMLElement;
}

export function maybe(scope: ParentNode, testId: string): HTMLElement | null {
  return scope.querySelector(`[data-testid="${testId}"]`) as HTMLElement | null;
}

export function qa(scope: ParentNode, testId: string): HTMLElement[] {
  return Array.from(scope.querySelectorAll(`[data-testid="${testId}"]`)) as HTMLElement[];
}

export function setValue(win: DOMWindow, input: HTMLElement, value: string): void {
  (input as HTMLInputElement).value = value;
  input.dispatchEvent(new win.Event("input", { bubbles: true }));
}

export function pressKey(win: DOMWindow, target: EventTarget, key: string): void {
  target.dispatchEvent(new win.KeyboardEvent("keydown", { key, bubbles: true }));
}
