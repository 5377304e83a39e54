// Console wiring: connect to a bridge endpoint, render the live chart and
// trajectory, let the operator fire the laser and control the session.

import { StripChart } from "./chart.js";
import { BridgeConnection } from "./connection.js";
import { fireLaser, LaserMode } from "./protocol.js";
import { ViewState } from "./state.js";
import { TrajectoryView } from "./trajectory.js";

function byId<T extends HTMLElement>(id: string): T {
  const element = document.getElementById(id);
  if (!element) throw new Error(`missing #${id}`);
  return element as T;
}

const state = new ViewState();
let connection: BridgeConnection | null = null;

const chart = new StripChart(byId<HTMLCanvasElement>("chart"));
const trajectory = new TrajectoryView(byId<HTMLCanvasElement>("trajectory"));
const banner = byId<HTMLDivElement>("banner");
const commandLog = byId<HTMLUListElement>("command-log");
const fireButton = byId<HTMLButtonElement>("fire");

function setBanner(text: string, cls: string): void {
  banner.textContent = text;
  banner.className = `banner ${cls}`;
}

function refreshControls(): void {
  const live = connection !== null && connection.canSend;
  fireButton.disabled = !live;
  byId<HTMLButtonElement>("pause").disabled = !live;
  byId<HTMLButtonElement>("resume").disabled = !live;
  byId<HTMLButtonElement>("reset").disabled = !live;
}

function renderCommandLog(): void {
  commandLog.innerHTML = "";
  for (const entry of state.commands.slice(-8).reverse()) {
    const item = document.createElement("li");
    const name = entry.command.kind;
    if (entry.ack === undefined) {
      item.textContent = `${name}: pending`;
    } else if (entry.ack.ok) {
      item.textContent = `${name}: ok, applies at ${entry.ack.applies_at_t?.toFixed(1)} s`;
    } else {
      item.textContent = `${name}: rejected (${entry.ack.error})`;
      item.className = "rejected";
    }
    commandLog.appendChild(item);
  }
}

function connect(): void {
  const endpoint = byId<HTMLInputElement>("endpoint").value.trim();
  if (connection) connection.close();
  state.start();
  connection = new BridgeConnection(
    endpoint,
    {
      onMessage: (message) => {
        if (message.kind === "ack") {
          state.recordAck(message);
          renderCommandLog();
        } else {
          state.apply(message);
        }
      },
      onPhase: (phase) => {
        state.phase = phase;
        if (phase === "live") setBanner(`live: ${endpoint}`, "ok");
        else if (phase === "reconnecting") setBanner("connection lost, retrying", "warn");
        else if (phase === "connecting") setBanner("connecting", "warn");
        else setBanner("disconnected", "err");
        refreshControls();
      },
    },
    (url) => new WebSocket(url),
  );
  connection.connect();
}

byId<HTMLButtonElement>("connect").addEventListener("click", connect);

fireButton.addEventListener("click", () => {
  if (!connection) return;
  const duration = Number(byId<HTMLInputElement>("duration").value) || 10;
  const amplitude = Number(byId<HTMLInputElement>("amplitude").value) || 0.2;
  const mode = byId<HTMLSelectElement>("mode").value as LaserMode;
  const command = fireLaser(duration, amplitude, mode);
  if (connection.send(command)) {
    state.recordCommand(command);
    renderCommandLog();
  }
});

for (const kind of ["pause", "resume", "reset"] as const) {
  byId<HTMLButtonElement>(kind).addEventListener("click", () => {
    if (connection && connection.send({ kind })) {
      state.recordCommand({ kind });
      renderCommandLog();
    }
  });
}

byId<HTMLInputElement>("speed").addEventListener("change", (event) => {
  const factor = Number((event.target as HTMLInputElement).value);
  if (connection && factor > 0) {
    connection.send({ kind: "set_speed", factor });
    byId<HTMLSpanElement>("speed-label").textContent = `${factor}x`;
  }
});

function frame(): void {
  chart.render(state);
  trajectory.render(state);
  requestAnimationFrame(frame);
}

setBanner("not connected", "err");
refreshControls();
requestAnimationFrame(frame);
