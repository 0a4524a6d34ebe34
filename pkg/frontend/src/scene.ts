/** Scene construction: a state frame becomes a list of drawing primitives.
 *
 * Primitives are expressed in world coordinates (meters, y up) so tests can
 * check geometry directly; the canvas painter applies the view transform.
 * Everything drawn is data received from the service; the only client-side
 * geometry is placing the elbow from the reported joint angles.
 */

import type { HelloMessage, StateFrame, Vec2 } from './protocol.js';

export const FORCE_SCALE = 4e-4; // m of arrow per N, ~1 m arrow at 2.5 kN
export const TRAIL_LIMIT = 400;

export type SceneNode =
  | { kind: 'segment'; a: Vec2; b: Vec2; color: string; width: number; dash?: number[] }
  | { kind: 'polyline'; points: Vec2[]; color: string; width: number }
  | { kind: 'circle'; center: Vec2; radius: number; color: string; fill: boolean }
  | { kind: 'arrow'; from: Vec2; to: Vec2; color: string; width: number }
  | { kind: 'label'; at: Vec2; text: string; color: string };

export interface Trail {
  points: Vec2[];
  mode: StateFrame['mode'];
}

export function updateTrail(trail: Trail, frame: StateFrame): Trail {
  const points = trail.mode === frame.mode ? trail.points.slice() : [];
  points.push(frame.slave);
  if (points.length > TRAIL_LIMIT) points.shift();
  return { points, mode: frame.mode };
}

export function forceArrow(frame: StateFrame): { from: Vec2; to: Vec2 } {
  const from = frame.slave;
  const to: Vec2 = [
    from[0] + frame.force[0] * FORCE_SCALE,
    from[1] + frame.force[1] * FORCE_SCALE,
  ];
  return { from, to };
}

export function buildScene(hello: HelloMessage, frame: StateFrame, trail: Trail): SceneNode[] {
  const nodes: SceneNode[] = [];

  for (const s of hello.surfaces) {
    nodes.push({ kind: 'segment', a: s.start, b: s.end, color: '#8d5a2b', width: 3 });
  }

  // Arm linkage: base -> elbow (from reported joint angle) -> reported tip.
  const [l1] = hello.links;
  const [q1] = frame.joints;
  const elbow: Vec2 = [
    hello.base[0] + (l1 ?? 0) * Math.cos(q1 ?? 0),
    hello.base[1] + (l1 ?? 0) * Math.sin(q1 ?? 0),
  ];
  nodes.push({
    kind: 'polyline',
    points: [hello.base, elbow, frame.slave],
    color: '#444',
    width: 5,
  });
  nodes.push({ kind: 'circle', center: hello.base, radius: 0.06, color: '#222', fill: true });
  nodes.push({ kind: 'circle', center: elbow, radius: 0.045, color: '#222', fill: true });

  if (trail.points.length > 1) {
    nodes.push({
      kind: 'polyline',
      points: trail.points,
      color: frame.mode === 'reproducing' ? '#2b8d46' : '#4a79d4',
      width: 1.5,
    });
  }

  // Tool tip, highlighted on contact.
  nodes.push({
    kind: 'circle',
    center: frame.slave,
    radius: 0.05,
    color: frame.contact ? '#d43a3a' : '#4a79d4',
    fill: true,
  });

  // Scaled master target: where the coupling is pulling the tool.
  const target: Vec2 = [
    frame.master[0] * hello.position_scale,
    frame.master[1] * hello.position_scale,
  ];
  nodes.push({ kind: 'circle', center: target, radius: 0.03, color: '#999', fill: false });
  nodes.push({
    kind: 'segment',
    a: target,
    b: frame.slave,
    color: '#bbb',
    width: 1,
    dash: [0.02, 0.02],
  });

  const force = Math.hypot(frame.force[0], frame.force[1]);
  if (force > 1e-9) {
    const { from, to } = forceArrow(frame);
    nodes.push({ kind: 'arrow', from, to, color: '#d43a3a', width: 3 });
    nodes.push({
      kind: 'label',
      at: [to[0], to[1] + 0.06],
      text: `${force.toFixed(0)} N`,
      color: '#d43a3a',
    });
  }

  nodes.push({
    kind: 'label',
    at: [hello.base[0] + 0.1, hello.base[1] + hello.reach + 0.15],
    text: `t=${frame.t.toFixed(2)}s  mode=${frame.mode}${frame.recording ? '  REC' : ''}`,
    color: '#333',
  });
  return nodes;
}
