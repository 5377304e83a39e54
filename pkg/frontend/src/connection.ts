// WebSocket client with automatic reconnect and exponential backoff.
// The socket constructor and timer are injected so tests can run the
// whole state machine without a browser.

import { BridgeMessage, Command, encodeCommand, parseMessage } from "./protocol.js";

export interface SocketLike {
  addEventListener(type: string, listener: (event: any) => void): void;
  send(data: string): void;
  close(): void;
}

export type SocketFactory = (url: string) => SocketLike;
export type Scheduler = (fn: () => void, delayMs: number) => void;

export interface ConnectionCallbacks {
  onMessage: (message: BridgeMessage) => void;
  onPhase: (phase: "connecting" | "live" | "reconnecting" | "closed") => void;
}

const BASE_DELAY_MS = 500;
const MAX_DELAY_MS = 10_000;

export class BridgeConnection {
  readonly url: string;
  retries = 0;
  private socket: SocketLike | null = null;
  private open = false;
  private stopped = false;
  private readonly callbacks: ConnectionCallbacks;
  private readonly makeSocket: SocketFactory;
  private readonly schedule: Scheduler;

  constructor(
    url: string,
    callbacks: ConnectionCallbacks,
    makeSocket: SocketFactory,
    schedule: Scheduler = (fn, ms) => setTimeout(fn, ms),
  ) {
    this.url = url;
    this.callbacks = callbacks;
    this.makeSocket = makeSocket;
    this.schedule = schedule;
  }

  connect(): void {
    if (this.stopped) return;
    this.callbacks.onPhase(this.retries === 0 ? "connecting" : "reconnecting");
    let socket: SocketLike;
    try {
      socket = this.makeSocket(this.url);
    } catch {
      this.retryLater();
      return;
    }
    this.socket = socket;
    socket.addEventListener("open", () => {
      this.open = true;
      this.retries = 0;
      this.callbacks.onPhase("live");
    });
    socket.addEventListener("message", (event: any) => {
      const data = typeof event.data === "string" ? event.data : String(event.data);
      const message = parseMessage(data);
      if (message !== null) this.callbacks.onMessage(message);
    });
    socket.addEventListener("close", () => {
      this.open = false;
      this.socket = null;
      if (!this.stopped) this.retryLater();
    });
    socket.addEventListener("error", () => {
      // close follows; nothing to do here
    });
  }

  private retryLater(): void {
    this.callbacks.onPhase("reconnecting");
    const delay = Math.min(MAX_DELAY_MS, BASE_DELAY_MS * 2 ** this.retries);
    this.retries += 1;
    this.schedule(() => this.connect(), delay);
  }

  get canSend(): boolean {
    return this.open && this.socket !== null;
  }

  /** Send a command; returns false (and sends nothing) when disconnected. */
  send(command: Command): boolean {
    if (!this.canSend || this.socket === null) return false;
    this.socket.send(encodeCommand(command));
    return true;
  }

  close(): void {
    this.stopped = true;
    this.callbacks.onPhase("closed");
    if (this.socket) this.socket.close();
    this.socket = null;
    this.open = false;
  }
}
