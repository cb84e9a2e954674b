/**
 * Single-page curation client. Four views share one shell: public browsing
 * with alphabet sections, stem-similarity search, public submission with a
 * duplicate warning dialog, and the curator review queue behind a login.
 *
 * The client holds no business logic. Ordering, similarity scores, duplicate
 * warnings and status transitions all come from the service; the views render
 * server payloads as they arrive and refetch after every mutation so the
 * screen always mirrors the last authoritative response.
 */

import {
  ApiError,
  CurationApi,
  Entry,
  ListParams,
  Listing,
  SearchHit,
} from "./api";
import { ScriptMode, renderText } from "./translit";

export type ViewName = "browse" | "search" | "add" | "queue";

export interface App {
  root: HTMLElement;
  show(view: ViewName): void;
  whenIdle(): Promise<void>;
}

// section navigation follows the Latin alphabet order the service sorts by
const LETTERS = [
  "A", "B", "C", "Č", "Ć", "D", "Dž", "Đ", "E", "F", "G", "H", "I", "J",
  "K", "L", "Lj", "M", "N", "Nj", "O", "P", "R", "S", "Š", "T", "U", "V",
  "Z", "Ž",
];

const SESSION_EXPIRED = "Sesija je istekla, prijavite se ponovo.";

interface BrowseState {
  prefix: string | null;
  page: number;
  listing: Listing | null;
  error: string | null;
}

interface SearchState {
  query: string;
  hits: SearchHit[] | null;
  error: string | null;
}

interface AddState {
  text: string;
  note: string;
  dialog: SearchHit[] | null;
  pendingText: string | null;
  pendingNote: string | null;
  notice: string | null;
  postWarnings: SearchHit[];
  error: string | null;
}

interface QueueState {
  items: Entry[] | null;
  selected: number | null;
  editing: number | null;
  editDraft: string;
  busy: Set<number>;
  error: string | null;
  loginError: string | null;
}

export function createApp(root: HTMLElement, api: CurationApi): App {
  const doc = root.ownerDocument;

  const state = {
    view: "browse" as ViewName,
    script: "latin" as ScriptMode,
    browse: { prefix: null, page: 1, listing: null, error: null } as BrowseState,
    search: { query: "", hits: null, error: null } as SearchState,
    add: {
      text: "",
      note: "",
      dialog: null,
      pendingText: null,
      pendingNote: null,
      notice: null,
      postWarnings: [],
      error: null,
    } as AddState,
    queue: {
      items: null,
      selected: null,
      editing: null,
      editDraft: "",
      busy: new Set<number>(),
      error: null,
      loginError: null,
    } as QueueState,
  };

  // ---- idle tracking so callers can await a settled screen

  let inflight = 0;
  let waiters: Array<() => void> = [];

  function track(work: Promise<unknown>): void {
    inflight += 1;
    const done = () => {
      inflight -= 1;
      if (inflight === 0) {
        const ready = waiters;
        waiters = [];
        for (const wake of ready) wake();
      }
    };
    work.then(done, done);
  }

  async function whenIdle(): Promise<void> {
    await Promise.resolve();
    while (inflight > 0) {
      await new Promise<void>((resolve) => waiters.push(resolve));
    }
  }

  // ---- small dom helpers

  function el(
    tag: string,
    attrs: Record<string, string> = {},
    ...children: Array<Node | string>
  ): HTMLElement {
    const node = doc.createElement(tag);
    for (const [key, value] of Object.entries(attrs)) {
      node.setAttribute(key, value);
    }
    for (const child of children) {
      node.append(typeof child === "string" ? doc.createTextNode(child) : child);
    }
    return node;
  }

  function button(
    label: string,
    testId: string,
    onClick: () => void,
    disabled = false,
  ): HTMLElement {
    const node = el("button", { type: "button", "data-testid": testId }, label);
    if (disabled) {
      node.setAttribute("disabled", "");
    }
    node.addEventListener("click", onClick);
    return node;
  }

  function shown(text: string): string {
    return renderText(text, state.script);
  }

  function messageOf(err: unknown): string {
    if (err instanceof ApiError) return err.detail;
    if (err instanceof Error) return err.message;
    return String(err);
  }

  // ---- shell

  const main = el("main", { "data-testid": "view" });
  const navButtons = new Map<ViewName, HTMLElement>();
  const nav = el("nav");
  const navEntries: Array<[ViewName, string, string]> = [
    ["browse", "Pregled", "nav-browse"],
    ["search", "Pretraga", "nav-search"],
    ["add", "Dodavanje", "nav-add"],
    ["queue", "Red za pregled", "nav-queue"],
  ];
  for (const [view, label, testId] of navEntries) {
    const btn = button(label, testId, () => showView(view));
    navButtons.set(view, btn);
    nav.append(btn);
  }
  const toggle = button("ћирилица", "script-toggle", () => {
    state.script = state.script === "latin" ? "cyrillic" : "latin";
    toggle.textContent = state.script === "latin" ? "ћирилица" : "latinica";
    rerender();
  });
  nav.append(toggle);
  const header = el("header", {}, el("h1", {}, "Poređenja"), nav);
  root.replaceChildren(header, main);

  function showView(view: ViewName): void {
    state.view = view;
    rerender();
    if (view === "browse") {
      loadBrowse();
    } else if (view === "queue" && api.hasToken()) {
      loadQueue();
    }
  }

  function rerender(): void {
    for (const [view, btn] of navButtons) {
      btn.classList.toggle("active", view === state.view);
    }
    switch (state.view) {
      case "browse":
        main.replaceChildren(renderBrowse());
        break;
      case "search":
        main.replaceChildren(renderSearch());
        break;
      case "add":
        main.replaceChildren(renderAdd());
        break;
      case "queue":
        main.replaceChildren(renderQueue());
        break;
    }
  }

  // ---- browse

  function loadBrowse(): void {
    track((async () => {
      state.browse.error = null;
      try {
        const params: ListParams = { page: state.browse.page };
        if (state.browse.prefix !== null) {
          params.prefix = state.browse.prefix;
        }
        state.browse.listing = await api.listSimiles(params);
      } catch (err) {
        state.browse.listing = null;
        state.browse.error = messageOf(err);
      }
      rerender();
    })());
  }

  function renderBrowse(): HTMLElement {
    const container = el("section", { "data-testid": "browse-view" });

    const letters = el("div", { class: "letters" });
    letters.append(
      button("Sve", "letter-all", () => {
        state.browse.prefix = null;
        state.browse.page = 1;
        loadBrowse();
      }),
    );
    for (const letter of LETTERS) {
      const prefix = letter.toLowerCase();
      const btn = button(letter, `letter-${prefix}`, () => {
        state.browse.prefix = prefix;
        state.browse.page = 1;
        loadBrowse();
      });
      btn.classList.toggle("active", state.browse.prefix === prefix);
      letters.append(btn);
    }
    container.append(letters);

    if (state.browse.error !== null) {
      container.append(
        el(
          "div",
          { "data-testid": "error-banner", class: "error" },
          `Greška: ${state.browse.error} `,
          button("Pokušaj ponovo", "retry", () => loadBrowse()),
        ),
      );
      return container;
    }

    const listing = state.browse.listing;
    if (listing === null) {
      container.append(el("p", { "data-testid": "loading" }, "Učitavanje..."));
      return container;
    }

    if (listing.items.length === 0) {
      container.append(el("p", { "data-testid": "empty-state" }, "Nema unosa."));
      return container;
    }

    const list = el("ol", { "data-testid": "browse-list" });
    for (const entry of listing.items) {
      list.append(
        el(
          "li",
          { "data-testid": "entry", "data-id": String(entry.id) },
          shown(entry.text),
        ),
      );
    }
    container.append(list);

    const pages = Math.max(1, Math.ceil(listing.total / listing.page_size));
    const pager = el("div", { class: "pager" });
    pager.append(
      button(
        "Prethodna",
        "prev",
        () => {
          state.browse.page -= 1;
          loadBrowse();
        },
        listing.page <= 1,
      ),
      el("span", { "data-testid": "page-info" }, `strana ${listing.page} od ${pages}`),
      button(
        "Sledeća",
        "next",
        () => {
          state.browse.page += 1;
          loadBrowse();
        },
        listing.page >= pages,
      ),
    );
    container.append(pager);
    return container;
  }

  // ---- search

  function doSearch(): void {
    const query = state.search.query.trim();
    if (query === "") {
      return;
    }
    track((async () => {
      state.search.error = null;
      try {
        state.search.hits = (await api.search(query)).results;
      } catch (err) {
        state.search.hits = null;
        state.search.error = messageOf(err);
      }
      rerender();
    })());
  }

  function renderSearch(): HTMLElement {
    const container = el("section", { "data-testid": "search-view" });

    const input = el("input", {
      "data-testid": "search-input",
      type: "text",
      placeholder: "npr. bela kao sneg",
    }) as HTMLInputElement;
    input.value = state.search.query;
    const submit = button("Traži", "search-button", () => doSearch(), state.search.query.trim() === "");
    input.addEventListener("input", () => {
      state.search.query = input.value;
      if (input.value.trim() === "") {
        // an emptied query resets the whole view
        state.search.hits = null;
        state.search.error = null;
        rerender();
      } else {
        submit.removeAttribute("disabled");
      }
    });
    input.addEventListener("keydown", (event) => {
      if ((event as KeyboardEvent).key === "Enter") {
        doSearch();
      }
    });
    container.append(el("div", { class: "search-bar" }, input, submit));

    if (state.search.error !== null) {
      container.append(
        el("div", { "data-testid": "search-error", class: "error" }, `Greška: ${state.search.error}`),
      );
      return container;
    }
    if (state.search.hits === null) {
      return container;
    }
    if (state.search.hits.length === 0) {
      container.append(el("p", { "data-testid": "empty-state" }, "Nema pogodaka."));
      return container;
    }
    const list = el("ol", { "data-testid": "search-results" });
    for (const hit of state.search.hits) {
      list.append(
        el(
          "li",
          { "data-testid": "search-hit", "data-id": String(hit.entry.id) },
          el("span", { class: "text" }, shown(hit.entry.text)),
          " ",
          el("span", { "data-testid": "similarity" }, hit.similarity.toFixed(3)),
        ),
      );
    }
    container.append(list);
    return container;
  }

  // ---- add

  function submitFlow(): void {
    const text = state.add.text.trim();
    if (text === "") {
      return;
    }
    const note = state.add.note.trim();
    track((async () => {
      state.add.notice = null;
      state.add.error = null;
      state.add.postWarnings = [];
      let hits: SearchHit[] = [];
      try {
        hits = (await api.search(text)).results;
      } catch {
        // the duplicate probe is advisory; submission still reports overlaps
      }
      if (hits.length > 0) {
        state.add.dialog = hits;
        state.add.pendingText = text;
        state.add.pendingNote = note === "" ? null : note;
        rerender();
        return;
      }
      await performSubmit(text, note === "" ? undefined : note);
    })());
  }

  async function performSubmit(text: string, note: string | undefined): Promise<void> {
    try {
      const result = await api.submit(text, note);
      state.add.notice = "Hvala! Unos je sačuvan i čeka odobrenje.";
      state.add.postWarnings = result.similar;
      state.add.text = "";
      state.add.note = "";
    } catch (err) {
      state.add.error = messageOf(err);
    }
    rerender();
  }

  function renderAdd(): HTMLElement {
    const container = el("section", { "data-testid": "add-view" });

    const text = el("input", {
      "data-testid": "add-text",
      type: "text",
      placeholder: "novo poređenje",
    }) as HTMLInputElement;
    text.value = state.add.text;
    const note = el("input", {
      "data-testid": "add-note",
      type: "text",
      placeholder: "napomena (neobavezno)",
    }) as HTMLInputElement;
    note.value = state.add.note;
    const submit = button("Pošalji", "add-submit", () => submitFlow(), state.add.text.trim() === "");
    text.addEventListener("input", () => {
      state.add.text = text.value;
      if (text.value.trim() === "") {
        submit.setAttribute("disabled", "");
      } else {
        submit.removeAttribute("disabled");
      }
    });
    note.addEventListener("input", () => {
      state.add.note = note.value;
    });
    container.append(el("div", { class: "add-form" }, text, note, submit));

    if (state.add.error !== null) {
      container.append(
        el("div", { "data-testid": "add-error", class: "error" }, `Greška: ${state.add.error}`),
      );
    }
    if (state.add.notice !== null) {
      container.append(el("div", { "data-testid": "pending-notice" }, state.add.notice));
      if (state.add.postWarnings.length > 0) {
        const list = el("ol", { "data-testid": "post-warnings" });
        for (const hit of state.add.postWarnings) {
          list.append(
            el("li", {}, `${shown(hit.entry.text)} (${hit.similarity.toFixed(3)})`),
          );
        }
        container.append(
          el("div", {}, el("p", {}, "Slični postojeći unosi:"), list),
        );
      }
    }

    if (state.add.dialog !== null) {
      const list = el("ol", { "data-testid": "dup-candidates" });
      for (const hit of state.add.dialog) {
        list.append(
          el(
            "li",
            {},
            `${shown(hit.entry.text)} (${hit.similarity.toFixed(3)})`,
          ),
        );
      }
      const dialog = el(
        "div",
        { "data-testid": "dup-dialog", role: "dialog", class: "dialog" },
        el("p", {}, "Slični unosi već postoje:"),
        list,
        button("Dodaj svejedno", "add-anyway", () => {
          const pendingText = state.add.pendingText;
          const pendingNote = state.add.pendingNote;
          state.add.dialog = null;
          state.add.pendingText = null;
          state.add.pendingNote = null;
          if (pendingText !== null) {
            track(performSubmit(pendingText, pendingNote ?? undefined));
          }
        }),
        button("Odustani", "add-cancel", () => {
          state.add.dialog = null;
          state.add.pendingText = null;
          state.add.pendingNote = null;
          rerender();
        }),
      );
      container.append(dialog);
    }
    return container;
  }

  // ---- queue

  async function loadQueueInner(): Promise<void> {
    try {
      const page = await api.pending();
      state.queue.items = page.items;
      state.queue.error = null;
      const ids = new Set(page.items.map((entry) => entry.id));
      if (state.queue.selected === null || !ids.has(state.queue.selected)) {
        state.queue.selected = page.items.length > 0 ? page.items[0].id : null;
      }
      if (state.queue.editing !== null && !ids.has(state.queue.editing)) {
        state.queue.editing = null;
      }
    } catch (err) {
      if (err instanceof ApiError && err.status === 401) {
        api.logout();
        state.queue.items = null;
        state.queue.loginError = SESSION_EXPIRED;
      } else {
        state.queue.items = null;
        state.queue.error = messageOf(err);
      }
    }
  }

  function loadQueue(): void {
    track((async () => {
      await loadQueueInner();
      rerender();
    })());
  }

  function doLogin(password: string): void {
    track((async () => {
      try {
        await api.login(password);
        state.queue.loginError = null;
        await loadQueueInner();
      } catch (err) {
        state.queue.loginError = messageOf(err);
      }
      rerender();
    })());
  }

  type TransitionKind = "approve" | "reject";

  function act(kind: TransitionKind, id: number): void {
    if (state.queue.busy.has(id)) {
      return;
    }
    state.queue.busy.add(id);
    rerender();
    track((async () => {
      try {
        if (kind === "approve") {
          await api.approve(id);
        } else {
          await api.reject(id);
        }
      } catch (err) {
        if (err instanceof ApiError && err.status === 401) {
          api.logout();
          state.queue.items = null;
          state.queue.loginError = SESSION_EXPIRED;
          state.queue.busy.delete(id);
          rerender();
          return;
        }
        if (!(err instanceof ApiError && err.status === 409)) {
          state.queue.error = messageOf(err);
        }
        // a conflict means the server state moved on; the refetch below
        // brings the screen back in line
      }
      state.queue.busy.delete(id);
      await loadQueueInner();
      rerender();
    })());
  }

  function saveEdit(id: number): void {
    const draft = state.queue.editDraft;
    track((async () => {
      try {
        await api.edit(id, draft);
        state.queue.editing = null;
      } catch (err) {
        if (err instanceof ApiError && err.status === 401) {
          api.logout();
          state.queue.items = null;
          state.queue.loginError = SESSION_EXPIRED;
          rerender();
          return;
        }
        state.queue.error = messageOf(err);
      }
      await loadQueueInner();
      rerender();
    })());
  }

  function actOnSelected(kind: TransitionKind): void {
    if (state.queue.selected !== null) {
      act(kind, state.queue.selected);
    }
  }

  function moveSelection(delta: number): void {
    const items = state.queue.items;
    if (items === null || items.length === 0) {
      return;
    }
    const index = items.findIndex((entry) => entry.id === state.queue.selected);
    const next = Math.min(items.length - 1, Math.max(0, index + delta));
    state.queue.selected = items[next].id;
    rerender();
  }

  doc.addEventListener("keydown", (event) => {
    if (state.view !== "queue" || !api.hasToken()) {
      return;
    }
    const target = event.target as HTMLElement | null;
    if (target && (target.tagName === "INPUT" || target.tagName === "TEXTAREA")) {
      return;
    }
    const key = (event as KeyboardEvent).key;
    if (key === "a") {
      actOnSelected("approve");
    } else if (key === "r") {
      actOnSelected("reject");
    } else if (key === "ArrowDown" || key === "j") {
      moveSelection(1);
    } else if (key === "ArrowUp" || key === "k") {
      moveSelection(-1);
    }
  });

  function renderQueue(): HTMLElement {
    const container = el("section", { "data-testid": "queue-view" });

    if (!api.hasToken()) {
      const password = el("input", {
        "data-testid": "password",
        type: "password",
        placeholder: "lozinka",
      }) as HTMLInputElement;
      const form = el(
        "div",
        { "data-testid": "login-form", class: "login" },
        el("p", {}, "Prijava kustosa"),
        password,
        button("Prijava", "login-submit", () => doLogin(password.value)),
      );
      password.addEventListener("keydown", (event) => {
        if ((event as KeyboardEvent).key === "Enter") {
          doLogin(password.value);
        }
      });
      container.append(form);
      if (state.queue.loginError !== null) {
        container.append(
          el("div", { "data-testid": "login-error", class: "error" }, state.queue.loginError),
        );
      }
      return container;
    }

    if (state.queue.error !== null) {
      container.append(
        el(
          "div",
          { "data-testid": "error-banner", class: "error" },
          `Greška: ${state.queue.error} `,
          button("Pokušaj ponovo", "retry", () => loadQueue()),
        ),
      );
    }

    const items = state.queue.items;
    if (items === null) {
      if (state.queue.error === null) {
        container.append(el("p", { "data-testid": "loading" }, "Učitavanje..."));
      }
      return container;
    }
    if (items.length === 0) {
      container.append(el("p", { "data-testid": "empty-state" }, "Red je prazan."));
      return container;
    }

    const list = el("ol", { "data-testid": "queue-list" });
    for (const entry of items) {
      const li = el("li", { "data-testid": "queue-item", "data-id": String(entry.id) });
      li.classList.toggle("selected", entry.id === state.queue.selected);
      li.addEventListener("click", () => {
        if (state.queue.selected !== entry.id) {
          state.queue.selected = entry.id;
          rerender();
        }
      });

      li.append(el("div", { class: "text" }, shown(entry.text)));
      const meta: string[] = [`poreklo: ${entry.origin}`];
      if (entry.classifier_score !== null) {
        meta.push(`ocena: ${entry.classifier_score.toFixed(3)}`);
      }
      if (Object.keys(entry.provenance).length > 0) {
        meta.push(JSON.stringify(entry.provenance));
      }
      li.append(el("div", { class: "meta", "data-testid": "meta" }, meta.join(" | ")));

      const busy = state.queue.busy.has(entry.id);
      if (state.queue.editing === entry.id) {
        const editInput = el("input", {
          "data-testid": "edit-input",
          type: "text",
        }) as HTMLInputElement;
        editInput.value = state.queue.editDraft;
        editInput.addEventListener("input", () => {
          state.queue.editDraft = editInput.value;
        });
        li.append(
          editInput,
          button("Sačuvaj", "edit-save", () => saveEdit(entry.id)),
          button("Otkaži", "edit-cancel", () => {
            state.queue.editing = null;
            rerender();
          }),
        );
      } else {
        li.append(
          button("Odobri", "approve", () => act("approve", entry.id), busy),
          button("Odbij", "reject", () => act("reject", entry.id), busy),
          button("Izmeni", "edit-toggle", () => {
            state.queue.editing = entry.id;
            state.queue.editDraft = entry.text;
            rerender();
          }, busy),
        );
      }
      list.append(li);
    }
    container.append(list);
    container.append(
      el(
        "p",
        { class: "hint" },
        "Prečice: a odobrava, r odbija, strelicama se bira stavka.",
      ),
    );
    return container;
  }

  showView("browse");

  return { root, show: showView, whenIdle };
}
