// Rendering-independent view state: a rolling telemetry buffer fed by the
// event stream. Rendering reads it, never mutates it.

import {
  AckEvent,
  Command,
  Decision,
  StimulusEvent,
  TelemetryEvent,
} from "./protocol.js";

export interface ChartPoint {
  t: number;
  volts: number;
  laserOn: boolean;
  decision?: Decision;
}

export interface PosePoint {
  t: number;
  x: number;
  y: number;
  theta: number;
}

export interface LaserMarker {
  tOn: number;
  tOff: number;
  mode: string;
}

export interface PendingCommand {
  command: Command;
  ack?: AckEvent;
}

export type ConnectionPhase =
  | "idle"
  | "connecting"
  | "live"
  | "reconnecting"
  | "closed";

export class ViewState {
  /** Chart window in simulation seconds. */
  windowS: number;
  points: ChartPoint[] = [];
  poses: PosePoint[] = [];
  markers: LaserMarker[] = [];
  commands: PendingCommand[] = [];
  phase: ConnectionPhase = "idle";
  sessionState = "";
  lastT = 0;
  private decisionCount = 0;
  private maxPoses: number;

  constructor(windowS = 120, maxPoses = 5000) {
    this.windowS = windowS;
    this.maxPoses = maxPoses;
  }

  apply(event: TelemetryEvent): void {
    this.lastT = Math.max(this.lastT, event.t);
    switch (event.kind) {
      case "sample": {
        const last = this.points[this.points.length - 1];
        if (last && event.t <= last.t) {
          if (event.t === last.t) {
            last.volts = event.volts;
            last.laserOn = event.laser_on;
          }
          break; // replayed or stale point: never duplicate
        }
        this.points.push({ t: event.t, volts: event.volts, laserOn: event.laser_on });
        this.trim();
        break;
      }
      case "decision": {
        const point = this.points[this.points.length - 1];
        if (point && point.t === event.t && point.decision === undefined) {
          point.decision = event.decision;
          this.decisionCount += 1;
        }
        break;
      }
      case "pose": {
        // pose count never exceeds decision count + 1 (the start pose)
        if (this.poses.length - 1 >= this.decisionCount) break;
        const last = this.poses[this.poses.length - 1];
        if (last && event.t <= last.t) break;
        this.poses.push({
          t: event.t,
          x: event.x_cm,
          y: event.y_cm,
          theta: event.theta_deg,
        });
        if (this.poses.length > this.maxPoses) {
          this.poses.splice(0, this.poses.length - this.maxPoses);
        }
        break;
      }
      case "stimulus":
        this.addMarker(event);
        break;
      case "status":
        this.sessionState = event.state;
        if (event.state === "reset") {
          this.clearTelemetry();
        }
        break;
    }
  }

  private addMarker(event: StimulusEvent): void {
    const tOff = event.t_on_s + event.duration_s;
    if (this.markers.some((m) => m.tOn === event.t_on_s && m.tOff === tOff)) {
      return;
    }
    this.markers.push({ tOn: event.t_on_s, tOff, mode: event.mode });
    if (this.markers.length > 256) this.markers.shift();
  }

  private trim(): void {
    const cutoff = this.lastT - this.windowS;
    let firstKept = 0;
    while (firstKept < this.points.length && this.points[firstKept].t < cutoff) {
      firstKept += 1;
    }
    if (firstKept > 0) this.points.splice(0, firstKept);
  }

  clearTelemetry(): void {
    this.points = [];
    this.poses = [{ t: 0, x: 0, y: 0, theta: 0 }];
    this.markers = [];
    this.decisionCount = 0;
    this.lastT = 0;
  }

  recordCommand(command: Command): PendingCommand {
    const pending: PendingCommand = { command };
    this.commands.push(pending);
    if (this.commands.length > 64) this.commands.shift();
    return pending;
  }

  recordAck(ack: AckEvent): void {
    const waiting = this.commands.find(
      (c) => c.ack === undefined && c.command.kind === ack.command,
    );
    if (waiting) waiting.ack = ack;
  }

  start(): void {
    this.clearTelemetry();
  }
}
