// Top-down view of the robot path, auto-scaled to the visited area.

import { ViewState } from "./state.js";

export class TrajectoryView {
  private ctx: CanvasRenderingContext2D;
  private width: number;
  private height: number;

  constructor(canvas: HTMLCanvasElement) {
    const ctx = canvas.getContext("2d");
    if (!ctx) throw new Error("2d canvas context unavailable");
    this.ctx = ctx;
    this.width = canvas.width;
    this.height = canvas.height;
  }

  render(state: ViewState): void {
    const { ctx, width, height } = this;
    ctx.clearRect(0, 0, width, height);
    ctx.fillStyle = "#10141a";
    ctx.fillRect(0, 0, width, height);
    const poses = state.poses;
    if (poses.length === 0) return;

    let xMin = Infinity, xMax = -Infinity, yMin = Infinity, yMax = -Infinity;
    for (const p of poses) {
      xMin = Math.min(xMin, p.x);
      xMax = Math.max(xMax, p.x);
      yMin = Math.min(yMin, p.y);
      yMax = Math.max(yMax, p.y);
    }
    const span = Math.max(xMax - xMin, yMax - yMin, 10); // at least 10 cm
    const cx = (xMin + xMax) / 2;
    const cy = (yMin + yMax) / 2;
    const scale = (Math.min(width, height) - 30) / span;
    // y up on screen
    const sx = (x: number) => width / 2 + (x - cx) * scale;
    const sy = (y: number) => height / 2 - (y - cy) * scale;

    // path
    ctx.strokeStyle = "#5fb8ff";
    ctx.lineWidth = 1.5;
    ctx.beginPath();
    poses.forEach((p, i) => {
      if (i === 0) ctx.moveTo(sx(p.x), sy(p.y));
      else ctx.lineTo(sx(p.x), sy(p.y));
    });
    ctx.stroke();

    // start marker
    ctx.fillStyle = "#8899aa";
    ctx.beginPath();
    ctx.arc(sx(poses[0].x), sy(poses[0].y), 3, 0, 2 * Math.PI);
    ctx.fill();

    // robot: triangle along the current heading
    const last = poses[poses.length - 1];
    const a = (last.theta * Math.PI) / 180;
    const r = 8;
    ctx.fillStyle = "#ffd75f";
    ctx.beginPath();
    ctx.moveTo(sx(last.x) + r * Math.cos(a), sy(last.y) - r * Math.sin(a));
    ctx.lineTo(
      sx(last.x) + r * 0.6 * Math.cos(a + 2.5),
      sy(last.y) - r * 0.6 * Math.sin(a + 2.5),
    );
    ctx.lineTo(
      sx(last.x) + r * 0.6 * Math.cos(a - 2.5),
      sy(last.y) - r * 0.6 * Math.sin(a - 2.5),
    );
    ctx.closePath();
    ctx.fill();

    ctx.fillStyle = "#8899aa";
    ctx.font = "11px sans-serif";
    ctx.fillText(`${span.toFixed(0)} cm across`, 8, height - 8);
  }
}
