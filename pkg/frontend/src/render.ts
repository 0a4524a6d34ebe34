/** Canvas painter: applies the world-to-screen transform to a scene. */

import type { SceneNode } from './scene.js';
import type { Vec2 } from './protocol.js';

export interface View {
  /** world meters -> canvas pixels */
  scale: number;
  /** world origin offset in meters */
  origin: Vec2;
  canvasHeight: number;
}

export function viewForReach(reach: number, width: number, height: number): View {
  const margin = 0.12 * reach;
  const scale = Math.min(width, height) / (reach + 2 * margin);
  return { scale, origin: [-margin, -margin], canvasHeight: height };
}

export function worldToScreen(view: View, p: Vec2): Vec2 {
  return [
    (p[0] - view.origin[0]) * view.scale,
    view.canvasHeight - (p[1] - view.origin[1]) * view.scale,
  ];
}

export function drawScene(ctx: CanvasRenderingContext2D, view: View, nodes: SceneNode[]): void {
  ctx.clearRect(0, 0, ctx.canvas.width, ctx.canvas.height);
  for (const node of nodes) {
    switch (node.kind) {
      case 'segment': {
        const a = worldToScreen(view, node.a);
        const b = worldToScreen(view, node.b);
        ctx.strokeStyle = node.color;
        ctx.lineWidth = node.width;
        ctx.setLineDash(node.dash ? node.dash.map((d) => d * view.scale) : []);
        ctx.beginPath();
        ctx.moveTo(a[0], a[1]);
        ctx.lineTo(b[0], b[1]);
        ctx.stroke();
        ctx.setLineDash([]);
        break;
      }
      case 'polyline': {
        ctx.strokeStyle = node.color;
        ctx.lineWidth = node.width;
        ctx.beginPath();
        node.points.forEach((p, i) => {
          const s = worldToScreen(view, p);
          if (i === 0) ctx.moveTo(s[0], s[1]);
          else ctx.lineTo(s[0], s[1]);
        });
        ctx.stroke();
        break;
      }
      case 'circle': {
        const c = worldToScreen(view, node.center);
        ctx.beginPath();
        ctx.arc(c[0], c[1], node.radius * view.scale, 0, 2 * Math.PI);
        if (node.fill) {
          ctx.fillStyle = node.color;
          ctx.fill();
        } else {
          ctx.strokeStyle = node.color;
          ctx.lineWidth = 1.5;
          ctx.stroke();
        }
        break;
      }
      case 'arrow': {
        const from = worldToScreen(view, node.from);
        const to = worldToScreen(view, node.to);
        ctx.strokeStyle = node.color;
        ctx.fillStyle = node.color;
        ctx.lineWidth = node.width;
        ctx.beginPath();
        ctx.moveTo(from[0], from[1]);
        ctx.lineTo(to[0], to[1]);
        ctx.stroke();
        const angle = Math.atan2(to[1] - from[1], to[0] - from[0]);
        const head = 9;
        ctx.beginPath();
        ctx.moveTo(to[0], to[1]);
        ctx.lineTo(to[0] - head * Math.cos(angle - 0.4), to[1] - head * Math.sin(angle - 0.4));
        ctx.lineTo(to[0] - head * Math.cos(angle + 0.4), to[1] - head * Math.sin(angle + 0.4));
        ctx.closePath();
        ctx.fill();
        break;
      }
      case 'label': {
        const at = worldToScreen(view, node.at);
        ctx.fillStyle = node.color;
        ctx.font = '13px system-ui, sans-serif';
        ctx.fillText(node.text, at[0], at[1]);
        break;
      }
    }
  }
}
