/** Socket client for the session service.
 *
 * Works over any browser-compatible WebSocket (native in the browser, the
 * `ws` package in tests). All outgoing traffic funnels through one method
 * that only accepts master-input and command messages, so the UI cannot
 * mutate simulation state any other way.
 */

import {
  type ClientMessage,
  type CmdMessage,
  type ErrorMessage,
  type HelloMessage,
  type ResultMessage,
  type StateFrame,
  parseServerMessage,
  serializeClientMessage,
} from './protocol.js';

export interface SocketLike {
  send(data: string): void;
  close(): void;
  onmessage: ((ev: { data: unknown }) => void) | null;
  onopen: ((ev: unknown) => void) | null;
  onclose: ((ev: unknown) => void) | null;
}

export interface ClientHandlers {
  onHello?: (msg: HelloMessage) => void;
  onState?: (msg: StateFrame) => void;
  onResult?: (msg: ResultMessage) => void;
  onError?: (msg: ErrorMessage) => void;
  onClose?: () => void;
}

export class WorkbenchClient {
  /** Every message ever sent, for protocol audits. */
  readonly sentLog: ClientMessage[] = [];
  hello: HelloMessage | null = null;
  lastState: StateFrame | null = null;
  lastStateAt = 0; // ms timestamp of the last state frame

  constructor(
    private socket: SocketLike,
    private handlers: ClientHandlers = {},
    private now: () => number = () => Date.now(),
  ) {
    socket.onmessage = (ev) => this.handleRaw(String(ev.data));
    socket.onclose = () => this.handlers.onClose?.();
  }

  handleRaw(raw: string): void {
    const msg = parseServerMessage(raw);
    if (msg === null) return;
    switch (msg.type) {
      case 'hello':
        this.hello = msg;
        this.handlers.onHello?.(msg);
        break;
      case 'state':
        this.lastState = msg;
        this.lastStateAt = this.now();
        this.handlers.onState?.(msg);
        break;
      case 'result':
        this.handlers.onResult?.(msg);
        break;
      case 'error':
        this.handlers.onError?.(msg);
        break;
    }
  }

  private send(msg: ClientMessage): void {
    this.socket.send(serializeClientMessage(msg));
    this.sentLog.push(msg);
  }

  sendMaster(t: number, pos: [number, number]): void {
    this.send({ type: 'master', t, pos });
  }

  sendCmd(action: CmdMessage['action'], extra: Record<string, unknown> = {}): void {
    this.send({ type: 'cmd', action, ...extra });
  }

  /** True when no state frame arrived within the staleness budget. */
  isStale(budgetMs = 200): boolean {
    return this.lastStateAt === 0 || this.now() - this.lastStateAt > budgetMs;
  }

  close(): void {
    this.socket.close();
  }
}
