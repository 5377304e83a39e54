// Strip chart of the marble potential. Marker encoding follows the
// original experiment figures: asterisk = positive reading / left turn,
// square = negative / right turn, circle = below threshold / no movement;
// dashed vertical line where the laser went on, solid where it went off.

import { Decision } from "./protocol.js";
import { ViewState } from "./state.js";

export type Glyph = "asterisk" | "square" | "circle";

export function glyphFor(decision: Decision): Glyph {
  switch (decision) {
    case "L":
      return "asterisk";
    case "R":
      return "square";
    case "S":
      return "circle";
  }
}

export interface ChartLayout {
  width: number;
  height: number;
  padLeft: number;
  padBottom: number;
  padTop: number;
}

const GLYPH_R = 4;

export class StripChart {
  private ctx: CanvasRenderingContext2D;
  private layout: ChartLayout;

  constructor(canvas: HTMLCanvasElement) {
    const ctx = canvas.getContext("2d");
    if (!ctx) throw new Error("2d canvas context unavailable");
    this.ctx = ctx;
    this.layout = {
      width: canvas.width,
      height: canvas.height,
      padLeft: 52,
      padBottom: 24,
      padTop: 10,
    };
  }

  render(state: ViewState): void {
    const { ctx } = this;
    const { width, height, padLeft, padBottom, padTop } = this.layout;
    ctx.clearRect(0, 0, width, height);
    ctx.fillStyle = "#10141a";
    ctx.fillRect(0, 0, width, height);
    if (state.points.length === 0) {
      ctx.fillStyle = "#8899aa";
      ctx.font = "13px sans-serif";
      ctx.fillText("waiting for telemetry", padLeft + 10, height / 2);
      return;
    }

    const t1 = Math.max(state.lastT, state.windowS * 0.25);
    const t0 = t1 - state.windowS;
    let vMax = 0.005;
    let vMin = -0.005;
    for (const p of state.points) {
      vMax = Math.max(vMax, p.volts);
      vMin = Math.min(vMin, p.volts);
    }
    const span = (vMax - vMin) * 0.1 + 1e-6;
    vMax += span;
    vMin -= span;

    const xOf = (t: number) =>
      padLeft + ((t - t0) / (t1 - t0)) * (width - padLeft - 8);
    const yOf = (v: number) =>
      padTop + ((vMax - v) / (vMax - vMin)) * (height - padTop - padBottom);

    this.drawAxes(t0, t1, vMin, vMax, xOf, yOf);
    this.drawLaserMarkers(state, t0, t1, xOf);

    // potential polyline
    ctx.strokeStyle = "#5fb8ff";
    ctx.lineWidth = 1.2;
    ctx.beginPath();
    state.points.forEach((p, i) => {
      const x = xOf(p.t);
      const y = yOf(p.volts);
      if (i === 0) ctx.moveTo(x, y);
      else ctx.lineTo(x, y);
    });
    ctx.stroke();

    // decision glyphs on the sampled points
    for (const p of state.points) {
      if (!p.decision) continue;
      this.drawGlyph(glyphFor(p.decision), xOf(p.t), yOf(p.volts));
    }
  }

  private drawAxes(
    t0: number,
    t1: number,
    vMin: number,
    vMax: number,
    xOf: (t: number) => number,
    yOf: (v: number) => number,
  ): void {
    const { ctx } = this;
    const { width, height, padLeft, padBottom } = this.layout;
    ctx.strokeStyle = "#2a3442";
    ctx.fillStyle = "#8899aa";
    ctx.font = "11px sans-serif";
    ctx.lineWidth = 1;

    // zero line
    if (vMin < 0 && vMax > 0) {
      const y0 = yOf(0);
      ctx.strokeStyle = "#3d4f63";
      ctx.beginPath();
      ctx.moveTo(padLeft, y0);
      ctx.lineTo(width - 8, y0);
      ctx.stroke();
    }
    // volt labels
    for (const v of [vMin, 0, vMax]) {
      if (v < vMin || v > vMax) continue;
      ctx.fillText(`${(v * 1000).toFixed(1)} mV`, 4, yOf(v) + 4);
    }
    // time labels every 20 s
    const step = 20;
    for (let t = Math.ceil(t0 / step) * step; t <= t1; t += step) {
      ctx.fillText(`${t.toFixed(0)} s`, xOf(t) - 10, height - padBottom + 16);
    }
  }

  private drawLaserMarkers(
    state: ViewState,
    t0: number,
    t1: number,
    xOf: (t: number) => number,
  ): void {
    const { ctx } = this;
    const { height, padBottom, padTop } = this.layout;
    ctx.strokeStyle = "#7fff9e";
    ctx.lineWidth = 1;
    for (const m of state.markers) {
      if (m.tOn >= t0 && m.tOn <= t1) {
        ctx.setLineDash([5, 4]); // dashed: laser on
        ctx.beginPath();
        ctx.moveTo(xOf(m.tOn), padTop);
        ctx.lineTo(xOf(m.tOn), height - padBottom);
        ctx.stroke();
      }
      if (m.tOff >= t0 && m.tOff <= t1) {
        ctx.setLineDash([]); // solid: laser off
        ctx.beginPath();
        ctx.moveTo(xOf(m.tOff), padTop);
        ctx.lineTo(xOf(m.tOff), height - padBottom);
        ctx.stroke();
      }
    }
    ctx.setLineDash([]);
  }

  private drawGlyph(glyph: Glyph, x: number, y: number): void {
    const { ctx } = this;
    ctx.strokeStyle = "#ffd75f";
    ctx.lineWidth = 1.2;
    switch (glyph) {
      case "asterisk":
        ctx.beginPath();
        for (let k = 0; k < 3; k++) {
          const a = (k * Math.PI) / 3;
          ctx.moveTo(x - GLYPH_R * Math.cos(a), y - GLYPH_R * Math.sin(a));
          ctx.lineTo(x + GLYPH_R * Math.cos(a), y + GLYPH_R * Math.sin(a));
        }
        ctx.stroke();
        break;
      case "square":
        ctx.strokeRect(x - GLYPH_R, y - GLYPH_R, 2 * GLYPH_R, 2 * GLYPH_R);
        break;
      case "circle":
        ctx.beginPath();
        ctx.arc(x, y, GLYPH_R, 0, 2 * Math.PI);
        ctx.stroke();
        break;
    }
  }
}
