/** Browser entry point: pointer teleoperation, live rendering, learning
 * and reproduction controls. */

import { WorkbenchClient } from './client.js';
import { WorkspaceMapping } from './mapping.js';
import { type Trail, buildScene, updateTrail } from './scene.js';
import { type View, drawScene, viewForReach } from './render.js';
import type { ResultMessage } from './protocol.js';

const SERVER_URL = `ws://${location.hostname || 'localhost'}:8765`;
const POINTER_RATE_MS = 20; // 50 Hz pointer messages, zero-order held upstream

const canvas = document.getElementById('scene') as HTMLCanvasElement;
const ctx = canvas.getContext('2d')!;
const statusEl = document.getElementById('status')!;
const paramsEl = document.getElementById('params')!;
const banner = document.getElementById('banner')!;

let view: View | null = null;
let trail: Trail = { points: [], mode: 'idle' };
let pointerDown = false;
let lastSent = 0;

const mapping = new WorkspaceMapping({ width: canvas.width, height: canvas.height });

const socket = new WebSocket(SERVER_URL);
const client = new WorkbenchClient(socket as never, {
  onHello(hello) {
    view = viewForReach(hello.reach, canvas.width, canvas.height);
    statusEl.textContent = `connected; arm reach ${hello.reach.toFixed(1)} m`;
  },
  onState(frame) {
    trail = updateTrail(trail, frame);
    if (view && client.hello) {
      drawScene(ctx, view, buildScene(client.hello, frame, trail));
    }
  },
  onResult(msg) {
    showResult(msg);
  },
  onError(msg) {
    statusEl.textContent = `error: ${msg.message}`;
  },
  onClose() {
    statusEl.textContent = 'disconnected';
  },
});

function showResult(msg: ResultMessage): void {
  if (msg.kind === 'learned') {
    const p = msg.parameters as {
      desired_direction: number[];
      position_gain: number[][];
      n_compliant: number;
    };
    const dir = p.desired_direction.map((v) => v.toFixed(4)).join(', ');
    const gain = p.position_gain
      .map((row) => row.map((v) => v.toFixed(2)).join('  '))
      .join('<br>');
    paramsEl.innerHTML =
      `<b>learned parameters</b><br>direction: (${dir})<br>` +
      `compliant axes: ${p.n_compliant}<br>position gain:<br>${gain}`;
  } else if (msg.kind === 'reproduction') {
    const m = msg.metrics as Record<string, number>;
    paramsEl.innerHTML =
      `<b>reproduction</b><br>contact: ${(m.contact_fraction! * 100).toFixed(1)}%<br>` +
      `mean |F|: ${m.mean_force_magnitude!.toFixed(0)} N<br>` +
      `max penetration: ${(m.max_penetration! * 1e3).toFixed(1)} mm`;
  } else {
    statusEl.textContent = msg.kind;
  }
}

function sendPointer(ev: PointerEvent): void {
  const now = performance.now();
  if (now - lastSent < POINTER_RATE_MS) return;
  lastSent = now;
  const rect = canvas.getBoundingClientRect();
  const { pos, clamped } = mapping.pointerToMaster(ev.clientX - rect.left, ev.clientY - rect.top);
  canvas.style.outline = clamped ? '3px solid #d43a3a' : '';
  client.sendMaster(now / 1000, pos);
}

canvas.addEventListener('pointerdown', (ev) => {
  pointerDown = true;
  canvas.setPointerCapture(ev.pointerId);
  sendPointer(ev);
});
canvas.addEventListener('pointermove', (ev) => {
  if (pointerDown) sendPointer(ev);
});
canvas.addEventListener('pointerup', () => {
  pointerDown = false;
});

for (const [id, action] of [
  ['btn-start', 'start_demo'],
  ['btn-stop', 'stop_demo'],
  ['btn-learn', 'learn'],
  ['btn-reproduce', 'reproduce'],
] as const) {
  document.getElementById(id)!.addEventListener('click', () => client.sendCmd(action));
}

setInterval(() => {
  banner.style.display = client.isStale(200) ? 'block' : 'none';
}, 100);
