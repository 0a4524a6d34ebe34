/** Message types of the session-service socket protocol (JSON text frames). */

export type Vec2 = [number, number];

export interface HelloMessage {
  type: 'hello';
  links: number[];
  base: Vec2;
  reach: number;
  position_scale: number;
  sim_rate: number;
  state_rate: number;
  surfaces: { start: Vec2; end: Vec2; friction: number }[];
}

export interface StateFrame {
  type: 'state';
  t: number;
  master: Vec2;
  slave: Vec2;
  force: Vec2;
  contact: boolean;
  joints: Vec2;
  mode: 'idle' | 'recording' | 'reproducing';
  recording: boolean;
}

export interface ResultMessage {
  type: 'result';
  kind: string;
  [key: string]: unknown;
}

export interface ErrorMessage {
  type: 'error';
  message: string;
}

export type ServerMessage = HelloMessage | StateFrame | ResultMessage | ErrorMessage;

export interface MasterMessage {
  type: 'master';
  t: number;
  pos: Vec2;
}

export interface CmdMessage {
  type: 'cmd';
  action: 'start_demo' | 'stop_demo' | 'learn' | 'reproduce' | 'set_config';
  [key: string]: unknown;
}

export type ClientMessage = MasterMessage | CmdMessage;

function isVec2(v: unknown): v is Vec2 {
  return Array.isArray(v) && v.length === 2 && v.every((x) => typeof x === 'number');
}

/** Parse and structurally validate one incoming frame; null if unusable. */
export function parseServerMessage(raw: string): ServerMessage | null {
  let msg: unknown;
  try {
    msg = JSON.parse(raw);
  } catch {
    return null;
  }
  if (typeof msg !== 'object' || msg === null) return null;
  const m = msg as Record<string, unknown>;
  switch (m.type) {
    case 'hello':
      if (Array.isArray(m.links) && isVec2(m.base) && Array.isArray(m.surfaces)) {
        return m as unknown as HelloMessage;
      }
      return null;
    case 'state':
      if (
        typeof m.t === 'number' &&
        isVec2(m.master) &&
        isVec2(m.slave) &&
        isVec2(m.force) &&
        isVec2(m.joints)
      ) {
        return m as unknown as StateFrame;
      }
      return null;
    case 'result':
      return typeof m.kind === 'string' ? (m as unknown as ResultMessage) : null;
    case 'error':
      return typeof m.message === 'string' ? (m as unknown as ErrorMessage) : null;
    default:
      return null;
  }
}

export function serializeClientMessage(msg: ClientMessage): string {
  if (msg.type !== 'master' && msg.type !== 'cmd') {
    throw new Error(`client may only send master or cmd messages, not ${(msg as { type: string }).type}`);
  }
  return JSON.stringify(msg);
}
