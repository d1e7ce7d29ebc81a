/** Entry point: wires the board, canvas, controls, and polling together. */

import { GameApi, fetchTransport } from "./api";
import { pollJob } from "./poll";
import { drawBoard } from "./render";
import { BoardState } from "./state";
import { defaultViewport, pan, screenToWorld, snapToGrid, zoom } from "./transform";

const api = new GameApi(fetchTransport(""));
const board = new BoardState(api);

const canvas = document.getElementById("board") as HTMLCanvasElement;
const banner = document.getElementById("banner") as HTMLDivElement;
const solveBtn = document.getElementById("solve") as HTMLButtonElement;
const presetBtn = document.getElementById("preset") as HTMLButtonElement;
const clearBtn = document.getElementById("clear") as HTMLButtonElement;
const modeSelect = document.getElementById("mode") as HTMLSelectElement;
const overlayToggle = document.getElementById("overlay") as HTMLInputElement;
const rectToggle = document.getElementById("rectangle") as HTMLInputElement;
const snapToggle = document.getElementById("snap") as HTMLInputElement;
const statusLine = document.getElementById("status") as HTMLDivElement;

let viewport = defaultViewport(canvas.width, canvas.height);
const SNAP_STEP = 0.1;

function redraw(): void {
  const ctx = canvas.getContext("2d");
  if (!ctx) return;
  drawBoard(ctx, viewport, board);
  const verdict = board.verdict();
  banner.textContent = verdict ? verdict.text : "";
  banner.className = verdict ? `banner ${verdict.tone}` : "banner";
  solveBtn.disabled = !board.canSolve;
  statusLine.textContent = board.busy
    ? "solving…"
    : board.error
      ? board.error
      : `${board.points.length} points`;
}

board.subscribe(redraw);

canvas.addEventListener("click", (ev) => {
  if (board.busy) return;
  const rect = canvas.getBoundingClientRect();
  let [wx, wy] = screenToWorld(viewport, ev.clientX - rect.left, ev.clientY - rect.top);
  if (snapToggle.checked) {
    [wx, wy] = snapToGrid(wx, wy, SNAP_STEP);
  }
  // Clicking an existing point removes it; empty space places a point.
  const hit = board.points.findIndex(
    (p) => Math.hypot(p[0] - wx, p[1] - wy) * viewport.scale < 8,
  );
  if (hit >= 0) {
    void board.removePoint(hit);
  } else {
    void board.addPoint(wx, wy);
  }
});

canvas.addEventListener("wheel", (ev) => {
  ev.preventDefault();
  const rect = canvas.getBoundingClientRect();
  viewport = zoom(
    viewport,
    ev.deltaY < 0 ? 1.15 : 1 / 1.15,
    ev.clientX - rect.left,
    ev.clientY - rect.top,
  );
  redraw();
});

let dragging: { x: number; y: number } | null = null;
canvas.addEventListener("mousedown", (ev) => {
  if (ev.button === 1 || ev.shiftKey) {
    dragging = { x: ev.clientX, y: ev.clientY };
    ev.preventDefault();
  }
});
window.addEventListener("mousemove", (ev) => {
  if (dragging) {
    viewport = pan(viewport, ev.clientX - dragging.x, ev.clientY - dragging.y);
    dragging = { x: ev.clientX, y: ev.clientY };
    redraw();
  }
});
window.addEventListener("mouseup", () => {
  dragging = null;
});

solveBtn.addEventListener("click", () => {
  void board
    .solve((jobId) => pollJob(api, jobId))
    .then(async () => {
      if (board.mode === "handicap" && overlayToggle.checked) {
        await board.refreshOverlay();
      }
    });
});

presetBtn.addEventListener("click", () => {
  presetBtn.disabled = true;
  void board.loadPreset().finally(() => {
    presetBtn.disabled = false;
    rectToggle.checked = true;
    board.showRectangle = true;
    redraw();
  });
});

clearBtn.addEventListener("click", () => {
  void board.init();
});

modeSelect.addEventListener("change", () => {
  board.setMode(modeSelect.value as "free" | "handicap");
});

overlayToggle.addEventListener("change", () => {
  board.showOverlay = overlayToggle.checked;
  if (board.showOverlay && board.sessionId) {
    void board.refreshOverlay();
  } else {
    redraw();
  }
});

rectToggle.addEventListener("change", () => {
  board.showRectangle = rectToggle.checked;
  redraw();
});

void board.init();
