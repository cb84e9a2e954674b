/**
 * Typed client for the curation service JSON API. Every decision (ordering,
 * dedup warnings, status transitions) is made server-side; this client only
 * moves requests and responses and keeps the session token.
 */

export interface Entry {
  id: number;
  text: string;
  stem_key: string;
  status: string;
  origin: string;
  provenance: Record<string, unknown>;
  classifier_score: number | null;
  created_at: number;
  updated_at: number;
}

export interface Listing {
  items: Entry[];
  page: number;
  page_size: number;
  total: number;
}

export interface SearchHit {
  entry: Entry;
  similarity: number;
}

export interface SearchResult {
  query: string;
  results: SearchHit[];
}

export interface SubmitResult {
  entry_id: number;
  entry: Entry;
  similar: SearchHit[];
}

export interface EntryEnvelope {
  entry: Entry;
}

export interface PendingList {
  items: Entry[];
  total: number;
}

export interface Stats {
  total: number;
  by_status: Record<string, number>;
  by_origin: Record<string, number>;
  approved: number;
  seed_mined_overlap: number;
}

export interface Session {
  token: string;
  expires_at: number;
}

export interface ListParams {
  status?: string;
  origin?: string;
  prefix?: string;
  page?: number;
  pageSize?: number;
}

export class ApiError extends Error {
  readonly status: number;
  readonly detail: string;

  constructor(status: number, detail: string) {
    super(detail);
    this.name = "ApiError";
    this.status = status;
    this.detail = detail;
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export interface CurationApi {
  hasToken(): boolean;
  login(password: string): Promise<Session>;
  logout(): void;
  listSimiles(params?: ListParams): Promise<Listing>;
  search(q: string): Promise<SearchResult>;
  submit(text: string, note?: string): Promise<SubmitResult>;
  approve(id: number): Promise<EntryEnvelope>;
  reject(id: number): Promise<EntryEnvelope>;
  reopen(id: number): Promise<EntryEnvelope>;
  edit(id: number, text: string): Promise<EntryEnvelope>;
  pending(): Promise<PendingList>;
  stats(): Promise<Stats>;
}

export class SimilesApi implements CurationApi {
  private readonly base: string;
  private readonly fetchFn: FetchLike;
  private token: string | null = null;

  constructor(baseUrl: string, fetchFn?: FetchLike) {
    this.base = baseUrl.replace(/\/+$/, "");
    // wrap the global so it is not called with a foreign `this`
    this.fetchFn = fetchFn ?? ((url, init) => fetch(url, init));
  }

  hasToken(): boolean {
    return this.token !== null;
  }

  logout(): void {
    this.token = null;
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const headers: Record<string, string> = {};
    if (this.token !== null) {
      headers["Authorization"] = `Bearer ${this.token}`;
    }
    const init: RequestInit = { method, headers };
    if (body !== undefined) {
      headers["Content-Type"] = "application/json";
      init.body = JSON.stringify(body);
    }
    const response = await this.fetchFn(this.base + path, init);
    if (!response.ok) {
      throw new ApiError(response.status, await describeFailure(response));
    }
    return (await response.json()) as T;
  }

  async login(password: string): Promise<Session> {
    const session = await this.request<Session>("POST", "/login", { password });
    this.token = session.token;
    return session;
  }

  listSimiles(params: ListParams = {}): Promise<Listing> {
    const query = new URLSearchParams();
    if (params.status !== undefined) query.set("status", params.status);
    if (params.origin !== undefined) query.set("origin", params.origin);
    if (params.prefix !== undefined) query.set("prefix", params.prefix);
    if (params.page !== undefined) query.set("page", String(params.page));
    if (params.pageSize !== undefined) query.set("page_size", String(params.pageSize));
    const suffix = query.toString();
    return this.request<Listing>("GET", suffix ? `/similes?${suffix}` : "/similes");
  }

  search(q: string): Promise<SearchResult> {
    const query = new URLSearchParams({ q });
    return this.request<SearchResult>("GET", `/similes/search?${query}`);
  }

  submit(text: string, note?: string): Promise<SubmitResult> {
    const body: Record<string, string> = { text };
    if (note !== undefined) {
      body.note = note;
    }
    return this.request<SubmitResult>("POST", "/similes", body);
  }

  approve(id: number): Promise<EntryEnvelope> {
    return this.request<EntryEnvelope>("POST", `/similes/${id}/approve`);
  }

  reject(id: number): Promise<EntryEnvelope> {
    return this.request<EntryEnvelope>("POST", `/similes/${id}/reject`);
  }

  reopen(id: number): Promise<EntryEnvelope> {
    return this.request<EntryEnvelope>("POST", `/similes/${id}/reopen`);
  }

  edit(id: number, text: string): Promise<EntryEnvelope> {
    return this.request<EntryEnvelope>("PUT", `/similes/${id}`, { text });
  }

  pending(): Promise<PendingList> {
    return this.request<PendingList>("GET", "/pending");
  }

  stats(): Promise<Stats> {
    return this.request<Stats>("GET", "/stats");
  }
}

async function describeFailure(response: Response): Promise<string> {
  try {
    const data: unknown = await response.json();
    if (data && typeof data === "object" && "detail" in data) {
      const detail = (data as { detail: unknown }).detail;
      return typeof detail === "string" ? detail : JSON.stringify(detail);
    }
    return JSON.stringify(data);
  } catch {
    return response.statusText || `HTTP ${response.status}`;
  }
}
