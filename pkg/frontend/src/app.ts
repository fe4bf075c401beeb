/**
 * Screen orchestration: start form, game board, score panel, completed
 * screen, and leaderboard, all driven by the service API.
 *
 * Placements are optimistic: the board updates immediately, then the
 * server's view replaces it; a rejected placement snaps back and shows
 * a toast with the error code.  Correctness marks only ever come from
 * submit responses, the client has no answer data to judge with.
 */

import { ApiClient, ApiError } from "./api.js";
import { buildBoardViewModel, renderBoard } from "./board.js";
import type { BoardHandlers } from "./board.js";
import type { LevelResultDoc, PlayerView, ScoreReportDoc } from "./types.js";

export interface AppOptions {
  baseUrl?: string;
  fetchFn?: typeof fetch;
  toastMs?: number;
}

export interface AppController {
  /** Resolves once every interaction started so far has settled. */
  whenIdle(): Promise<void>;
}

type Screen = "start" | "game" | "completed" | "leaderboard";

const MAX_STARS = 3;

export function initApp(root: HTMLElement, options: AppOptions = {}): AppController {
  const client = new ApiClient(options.baseUrl ?? "", options.fetchFn);
  const toastMs = options.toastMs ?? 4000;

  let view: PlayerView | null = null;
  let lastReport: ScoreReportDoc | null = null;
  let completedHistory: LevelResultDoc[] = [];
  let screen: Screen = "start";
  let previousScreen: Screen = "start";

  // every interaction chains onto this so tests can await quiescence
  let pending: Promise<void> = Promise.resolve();
  function track(work: Promise<unknown>): void {
    const settled = work.then(
      () => undefined,
      () => undefined,
    );
    pending = pending.then(() => settled);
  }
  async function whenIdle(): Promise<void> {
    let tail: Promise<void>;
    do {
      tail = pending;
      await tail;
    } while (tail !== pending);
  }

  root.textContent = "";
  root.className = "app";

  const header = document.createElement("header");
  const h1 = document.createElement("h1");
  h1.textContent = "onto-ling";
  const sessionInfo = document.createElement("div");
  sessionInfo.className = "session-info";
  const nav = document.createElement("nav");
  const navLeaderboard = document.createElement("button");
  navLeaderboard.type = "button";
  navLeaderboard.className = "nav-leaderboard";
  navLeaderboard.textContent = "leaderboard";
  navLeaderboard.addEventListener("click", () => track(showLeaderboard()));
  nav.append(navLeaderboard);
  header.append(h1, sessionInfo, nav);

  const errorPanel = document.createElement("div");
  errorPanel.className = "error-panel hidden";

  const main = document.createElement("main");
  main.className = "screen";

  const toasts = document.createElement("div");
  toasts.className = "toasts";

  root.append(header, errorPanel, main, toasts);

  function toast(code: string, message: string): void {
    const el = document.createElement("div");
    el.className = "toast";
    el.setAttribute("data-code", code);
    el.textContent = `${code}: ${message}`;
    toasts.append(el);
    setTimeout(() => el.remove(), toastMs);
  }

  function showError(err: unknown): void {
    const code = err instanceof ApiError ? err.machineCode : "UnexpectedError";
    const message = err instanceof Error ? err.message : String(err);
    errorPanel.textContent = "";
    const label = document.createElement("strong");
    label.className = "machine-code";
    label.textContent = code;
    const text = document.createElement("span");
    text.textContent = ` ${message} `;
    const dismiss = document.createElement("button");
    dismiss.type = "button";
    dismiss.className = "error-dismiss";
    dismiss.textContent = "dismiss";
    dismiss.addEventListener("click", () => errorPanel.classList.add("hidden"));
    errorPanel.append(label, text, dismiss);
    errorPanel.classList.remove("hidden");
  }

  function clearError(): void {
    errorPanel.classList.add("hidden");
  }

  // --- start screen ---------------------------------------------------------

  function renderStart(): void {
    screen = "start";
    sessionInfo.textContent = "";
    main.textContent = "";
    const form = document.createElement("form");
    form.className = "start-form";

    const playerLabel = document.createElement("label");
    playerLabel.textContent = "player ";
    const playerInput = document.createElement("input");
    playerInput.name = "player";
    playerInput.required = true;
    playerLabel.append(playerInput);

    const seedLabel = document.createElement("label");
    seedLabel.textContent = "seed (optional) ";
    const seedInput = document.createElement("input");
    seedInput.name = "seed";
    seedInput.inputMode = "numeric";
    seedLabel.append(seedInput);

    const start = document.createElement("button");
    start.type = "submit";
    start.className = "start-button";
    start.textContent = "start game";

    form.append(playerLabel, seedLabel, start);
    form.addEventListener("submit", (event) => {
      event.preventDefault();
      const player = playerInput.value.trim();
      const seed = seedInput.value.trim();
      track(startGame(player, seed === "" ? undefined : seed));
    });
    main.append(form);
  }

  async function startGame(player: string, seed?: string): Promise<void> {
    try {
      const created = await client.createSession(player, seed);
      view = created.view;
      lastReport = null;
      clearError();
      renderGame();
    } catch (err) {
      showError(err);
    }
  }

  // --- game screen ----------------------------------------------------------

  const handlers: BoardHandlers = {
    onDrop(slotId, term) {
      track(placeTerm(slotId, term));
    },
    onUnplace(slotId) {
      track(unplaceTerm(slotId));
    },
  };

  function renderGame(): void {
    if (view === null) return;
    screen = "game";
    sessionInfo.textContent = `${view.player} · level ${view.level} · seed ${view.puzzle.seed}`;
    main.textContent = "";

    const game = document.createElement("div");
    game.className = "game";
    const board = document.createElement("div");
    board.className = "board";
    const vm = buildBoardViewModel(view);
    renderBoard(board, vm, handlers, lastReport);

    const controls = document.createElement("div");
    controls.className = "controls";
    const submit = document.createElement("button");
    submit.type = "button";
    submit.className = "submit-button";
    if (vm.emptySlotCount > 0) {
      submit.disabled = true;
      const slots = vm.emptySlotCount === 1 ? "slot" : "slots";
      submit.textContent = `submit (${vm.emptySlotCount} ${slots} empty)`;
    } else {
      submit.disabled = false;
      submit.textContent = "submit answers";
    }
    submit.addEventListener("click", () => track(submitLevel()));
    controls.append(submit);

    game.append(board, controls);
    main.append(game);
    if (lastReport !== null) {
      main.append(renderScorePanel(lastReport));
    }
  }

  async function placeTerm(slotId: string, term: string): Promise<void> {
    if (view === null) return;
    const snapshot = view;
    // marks from an earlier submit are stale once the board changes
    lastReport = null;
    view = {
      ...view,
      placements: { ...view.placements, [slotId]: term },
    };
    renderGame();
    try {
      view = await client.place(snapshot.session_id, slotId, term);
      renderGame();
    } catch (err) {
      view = snapshot;
      renderGame();
      if (err instanceof ApiError) toast(err.machineCode, err.message);
      else showError(err);
    }
  }

  async function unplaceTerm(slotId: string): Promise<void> {
    if (view === null) return;
    const snapshot = view;
    lastReport = null;
    const placements = { ...view.placements };
    delete placements[slotId];
    view = { ...view, placements };
    renderGame();
    try {
      view = await client.unplace(snapshot.session_id, slotId);
      renderGame();
    } catch (err) {
      view = snapshot;
      renderGame();
      if (err instanceof ApiError) toast(err.machineCode, err.message);
      else showError(err);
    }
  }

  async function submitLevel(): Promise<void> {
    if (view === null) return;
    try {
      const report = await client.submit(view.session_id);
      lastReport = report;
      renderGame();
    } catch (err) {
      if (err instanceof ApiError) toast(err.machineCode, err.message);
      else showError(err);
    }
  }

  function renderScorePanel(report: ScoreReportDoc): HTMLElement {
    const panel = document.createElement("div");
    panel.className = "score-panel";

    const heading = document.createElement("h2");
    heading.textContent = `level ${report.level}`;
    panel.append(heading);

    const stars = document.createElement("div");
    stars.className = "stars";
    stars.setAttribute("data-stars", String(report.stars));
    stars.textContent =
      "★".repeat(report.stars) + "☆".repeat(MAX_STARS - report.stars);
    panel.append(stars);

    const score = document.createElement("p");
    score.className = "level-score";
    score.textContent = `level score: ${report.level_score}`;
    panel.append(score);

    const perNetwork = document.createElement("ul");
    perNetwork.className = "network-scores";
    for (const ns of report.per_network) {
      const li = document.createElement("li");
      li.textContent = `${ns.network_id}: ${ns.correct_count}/${ns.slot_count} (${ns.score_percent})`;
      perNetwork.append(li);
    }
    panel.append(perNetwork);

    const expressions = document.createElement("ul");
    expressions.className = "expressions";
    const seen = new Set<string>();
    for (const verdict of report.verdicts) {
      for (const sentence of verdict.expressions) {
        if (seen.has(sentence)) continue;
        seen.add(sentence);
        const li = document.createElement("li");
        li.textContent = sentence;
        expressions.append(li);
      }
    }
    panel.append(expressions);

    const note = document.createElement("p");
    note.className = "panel-note";
    if (report.passed && report.status === "awaiting_advance") {
      note.textContent = "level passed";
      const ascend = document.createElement("button");
      ascend.type = "button";
      ascend.className = "ascend-button";
      ascend.textContent = `ascend to level ${report.level + 1}`;
      ascend.addEventListener("click", () => track(ascendLevel()));
      panel.append(note, ascend);
    } else if (report.passed) {
      note.textContent = "final level passed";
      const finish = document.createElement("button");
      finish.type = "button";
      finish.className = "finish-button";
      finish.textContent = "finish";
      finish.addEventListener("click", () => finishGame(report));
      panel.append(note, finish);
    } else {
      note.textContent = "not passed yet, rearrange the terms and resubmit";
      const retry = document.createElement("button");
      retry.type = "button";
      retry.className = "retry-button";
      retry.textContent = "keep trying";
      retry.addEventListener("click", () => {
        panel.remove();
      });
      panel.append(note, retry);
    }
    return panel;
  }

  async function ascendLevel(): Promise<void> {
    if (view === null) return;
    try {
      view = await client.advance(view.session_id);
      lastReport = null;
      renderGame();
    } catch (err) {
      if (err instanceof ApiError) toast(err.machineCode, err.message);
      else showError(err);
    }
  }

  function finishGame(report: ScoreReportDoc): void {
    const history = view === null ? [] : view.history;
    completedHistory = [
      ...history,
      {
        level: report.level,
        score: report.level_score,
        stars: report.stars,
        submitted_at: "",
      },
    ];
    view = null;
    lastReport = null;
    renderCompleted();
  }

  // --- completed screen -----------------------------------------------------

  function renderCompleted(): void {
    screen = "completed";
    sessionInfo.textContent = "";
    main.textContent = "";

    const wrap = document.createElement("div");
    wrap.className = "completed";
    const heading = document.createElement("h2");
    heading.textContent = "all levels complete";
    wrap.append(heading);

    const table = document.createElement("table");
    table.className = "history";
    const tbody = document.createElement("tbody");
    let total = 0;
    for (const result of completedHistory) {
      total += result.score;
      const row = document.createElement("tr");
      const level = document.createElement("td");
      level.textContent = `level ${result.level}`;
      const score = document.createElement("td");
      score.textContent = String(result.score);
      const stars = document.createElement("td");
      stars.textContent =
        "★".repeat(result.stars) + "☆".repeat(MAX_STARS - result.stars);
      row.append(level, score, stars);
      tbody.append(row);
    }
    table.append(tbody);
    wrap.append(table);

    const totalLine = document.createElement("p");
    totalLine.className = "total-score";
    totalLine.textContent = `total score: ${total}`;
    wrap.append(totalLine);

    const toBoard = document.createElement("button");
    toBoard.type = "button";
    toBoard.className = "view-leaderboard";
    toBoard.textContent = "view leaderboard";
    toBoard.addEventListener("click", () => track(showLeaderboard()));
    const again = document.createElement("button");
    again.type = "button";
    again.className = "new-game";
    again.textContent = "new game";
    again.addEventListener("click", () => renderStart());
    wrap.append(toBoard, again);
    main.append(wrap);
  }

  // --- leaderboard screen ---------------------------------------------------

  async function showLeaderboard(): Promise<void> {
    if (screen !== "leaderboard") previousScreen = screen;
    try {
      const doc = await client.leaderboard();
      screen = "leaderboard";
      sessionInfo.textContent = "";
      main.textContent = "";

      const wrap = document.createElement("div");
      wrap.className = "leaderboard";
      const heading = document.createElement("h2");
      heading.textContent = "leaderboard";
      wrap.append(heading);

      if (doc.entries.length === 0) {
        const empty = document.createElement("p");
        empty.className = "leaderboard-empty";
        empty.textContent = "no games yet";
        wrap.append(empty);
      } else {
        const table = document.createElement("table");
        const tbody = document.createElement("tbody");
        // rows stay in server order; the first one is the winner
        doc.entries.forEach((entry, i) => {
          const row = document.createElement("tr");
          if (i === 0) row.className = "winner";
          const player = document.createElement("td");
          player.textContent = entry.player;
          const total = document.createElement("td");
          total.textContent = String(entry.total_score);
          const levels = document.createElement("td");
          levels.textContent = `${entry.levels_completed} levels`;
          const when = document.createElement("td");
          when.textContent = entry.last_submission;
          row.append(player, total, levels, when);
          tbody.append(row);
        });
        table.append(tbody);
        wrap.append(table);
      }

      const back = document.createElement("button");
      back.type = "button";
      back.className = "back-button";
      back.textContent = "back";
      back.addEventListener("click", () => {
        if (previousScreen === "game" && view !== null) renderGame();
        else if (previousScreen === "completed") renderCompleted();
        else renderStart();
      });
      wrap.append(back);
      main.append(wrap);
    } catch (err) {
      showError(err);
    }
  }

  renderStart();
  return { whenIdle };
}
