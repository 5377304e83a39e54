// Message types of the bridge protocol: one JSON object per WebSocket
// message, events flowing in, commands flowing out.

export type Decision = "L" | "R" | "S";
export type LaserMode = "inhibit" | "excite";

export interface SampleEvent {
  kind: "sample";
  t: number;
  volts: number;
  laser_on: boolean;
}

export interface DecisionEvent {
  kind: "decision";
  t: number;
  decision: Decision;
}

export interface PoseEvent {
  kind: "pose";
  t: number;
  x_cm: number;
  y_cm: number;
  theta_deg: number;
}

export interface StimulusEvent {
  kind: "stimulus";
  t: number;
  t_on_s: number;
  duration_s: number;
  amplitude: number;
  mode: LaserMode;
}

export interface StatusEvent {
  kind: "status";
  t: number;
  state: string;
  detail?: string;
}

export interface AckEvent {
  kind: "ack";
  command: string | null;
  ok: boolean;
  applies_at_t?: number;
  error?: string;
}

export type TelemetryEvent =
  | SampleEvent
  | DecisionEvent
  | PoseEvent
  | StimulusEvent
  | StatusEvent;

export type BridgeMessage = TelemetryEvent | AckEvent;

export interface FireLaserCommand {
  kind: "fire_laser";
  duration_s: number;
  amplitude: number;
  mode: LaserMode;
}

export interface SetSpeedCommand {
  kind: "set_speed";
  factor: number;
}

export interface SimpleCommand {
  kind: "pause" | "resume" | "reset";
}

export type Command = FireLaserCommand | SetSpeedCommand | SimpleCommand;

const EVENT_KINDS = new Set(["sample", "decision", "pose", "stimulus", "status", "ack"]);

function isFiniteNumber(x: unknown): x is number {
  return typeof x === "number" && Number.isFinite(x);
}

/** Parse one wire message; returns null for anything malformed. */
export function parseMessage(data: string): BridgeMessage | null {
  let obj: any;
  try {
    obj = JSON.parse(data);
  } catch {
    return null;
  }
  if (typeof obj !== "object" || obj === null || !EVENT_KINDS.has(obj.kind)) {
    return null;
  }
  switch (obj.kind) {
    case "sample":
      if (!isFiniteNumber(obj.t) || !isFiniteNumber(obj.volts)) return null;
      return obj as SampleEvent;
    case "decision":
      if (!isFiniteNumber(obj.t)) return null;
      if (obj.decision !== "L" && obj.decision !== "R" && obj.decision !== "S") return null;
      return obj as DecisionEvent;
    case "pose":
      if (![obj.t, obj.x_cm, obj.y_cm, obj.theta_deg].every(isFiniteNumber)) return null;
      return obj as PoseEvent;
    case "stimulus":
      if (![obj.t, obj.t_on_s, obj.duration_s, obj.amplitude].every(isFiniteNumber)) return null;
      return obj as StimulusEvent;
    case "status":
      if (!isFiniteNumber(obj.t) || typeof obj.state !== "string") return null;
      return obj as StatusEvent;
    case "ack":
      if (typeof obj.ok !== "boolean") return null;
      return obj as AckEvent;
  }
  return null;
}

export function encodeCommand(command: Command): string {
  return JSON.stringify(command);
}

export function fireLaser(
  duration_s = 10,
  amplitude = 0.2,
  mode: LaserMode = "inhibit",
): FireLaserCommand {
  return { kind: "fire_laser", duration_s, amplitude, mode };
}
