import { nodeLabel, nodeRole } from "./state.js";
import type { GraphDocument, LayoutMap, NodeColors, NodeRole } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";
export const VIEW_WIDTH = 1200;
export const VIEW_HEIGHT = 800;
const NODE_RADIUS = 18;
const DRAG_THRESHOLD = 3;

export interface CanvasHandlers {
  onBackgroundContext(x: number, y: number): void;
  onObjectContext(objectId: string): void;
  onObjectClick(objectId: string): void;
  onNodeDragEnd(nodeId: string, x: number, y: number): void;
  onZoomChange(): void;
}

interface DragTracking {
  nodeId: string;
  startClient: { x: number; y: number };
  startWorld: { x: number; y: number };
  moved: boolean;
}

/** SVG drawing surface: renders the cached document + layout, owns pointer bindings. */
export class GraphCanvas {
  readonly svg: SVGSVGElement;
  zoom = 1;
  pan = { x: 0, y: 0 };
  private colors: NodeColors = { object: "#E53935", relationship: "#FDD835", attribute: "#1E88E5" };
  private drag: DragTracking | null = null;
  private positions: Record<string, [number, number]> = {};

  constructor(
    private host: HTMLElement,
    private handlers: CanvasHandlers,
  ) {
    this.svg = document.createElementNS(SVG_NS, "svg") as SVGSVGElement;
    this.svg.setAttribute("id", "graph-canvas");
    this.svg.setAttribute("width", String(VIEW_WIDTH));
    this.svg.setAttribute("height", String(VIEW_HEIGHT));
    this.applyView();
    host.appendChild(this.svg);

    this.svg.addEventListener("contextmenu", (event) => {
      event.preventDefault();
      const target = event.target as Element;
      const nodeId = target.getAttribute?.("data-node-id");
      if (nodeId && target.getAttribute("data-role") === "object") {
        this.handlers.onObjectContext(nodeId);
      } else if (!nodeId) {
        const point = this.toWorld(event.clientX, event.clientY);
        this.handlers.onBackgroundContext(point.x, point.y);
      }
    });
    this.svg.addEventListener("click", (event) => {
      const target = event.target as Element;
      const nodeId = target.getAttribute?.("data-node-id");
      if (nodeId && target.getAttribute("data-role") === "object" && !this.drag?.moved) {
        this.handlers.onObjectClick(nodeId);
      }
    });
    this.svg.addEventListener("mousedown", (event) => {
      if (event.button !== 0) return;
      const target = event.target as Element;
      const nodeId = target.getAttribute?.("data-node-id");
      if (!nodeId) return;
      const [x, y] = this.positions[nodeId] ?? [0, 0];
      this.drag = {
        nodeId,
        startClient: { x: event.clientX, y: event.clientY },
        startWorld: { x, y },
        moved: false,
      };
    });
    this.svg.addEventListener("mousemove", (event) => {
      if (!this.drag) return;
      const dx = (event.clientX - this.drag.startClient.x) / this.zoom;
      const dy = (event.clientY - this.drag.startClient.y) / this.zoom;
      if (!this.drag.moved && Math.hypot(dx, dy) < DRAG_THRESHOLD) return;
      this.drag.moved = true;
      // live preview while dragging; the server is told on release
      this.moveNode(this.drag.nodeId, this.drag.startWorld.x + dx, this.drag.startWorld.y + dy);
    });
    this.svg.addEventListener("mouseup", (event) => {
      const drag = this.drag;
      this.drag = null;
      if (!drag || !drag.moved) return;
      const dx = (event.clientX - drag.startClient.x) / this.zoom;
      const dy = (event.clientY - drag.startClient.y) / this.zoom;
      this.handlers.onNodeDragEnd(drag.nodeId, drag.startWorld.x + dx, drag.startWorld.y + dy);
    });
    this.svg.addEventListener("wheel", (event) => {
      event.preventDefault();
      const factor = event.deltaY < 0 ? 1.1 : 1 / 1.1;
      this.zoom = Math.min(8, Math.max(0.125, this.zoom * factor));
      this.applyView();
      this.handlers.onZoomChange();
    });
  }

  setColors(colors: NodeColors): void {
    this.colors = colors;
  }

  colorFor(role: NodeRole): string {
    return this.colors[role];
  }

  /** Zoom/pan are a pure view transform: only the viewBox changes. */
  applyView(): void {
    const width = VIEW_WIDTH / this.zoom;
    const height = VIEW_HEIGHT / this.zoom;
    this.svg.setAttribute(
      "viewBox",
      `${-this.pan.x} ${-this.pan.y} ${width} ${height}`,
    );
  }

  toWorld(clientX: number, clientY: number): { x: number; y: number } {
    const rect = this.svg.getBoundingClientRect();
    return {
      x: (clientX - rect.left) / this.zoom - this.pan.x,
      y: (clientY - rect.top) / this.zoom - this.pan.y,
    };
  }

  renderedNodeIds(): Set<string> {
    const ids = new Set<string>();
    this.svg.querySelectorAll("circle[data-node-id]").forEach((el) => {
      ids.add(el.getAttribute("data-node-id")!);
    });
    return ids;
  }

  render(doc: GraphDocument, layout: LayoutMap, selected: string | null): void {
    this.positions = layout.positions;
    while (this.svg.firstChild) this.svg.removeChild(this.svg.firstChild);

    // edges below nodes on the live canvas
    for (const [from, to, role] of layout.edges) {
      const a = layout.positions[from];
      const b = layout.positions[to];
      if (!a || !b) continue;
      const line = document.createElementNS(SVG_NS, "line");
      line.setAttribute("x1", String(a[0]));
      line.setAttribute("y1", String(a[1]));
      line.setAttribute("x2", String(b[0]));
      line.setAttribute("y2", String(b[1]));
      line.setAttribute("class", `edge ${role}`);
      line.setAttribute("stroke", "#607D8B");
      line.setAttribute("data-edge-from", from);
      line.setAttribute("data-edge-to", to);
      if (role === "relationship-object") line.setAttribute("stroke-dasharray", "4 3");
      this.svg.appendChild(line);
    }

    for (const [nodeId, [x, y]] of Object.entries(layout.positions)) {
      const role = nodeRole(doc, nodeId);
      if (!role) continue;
      const circle = document.createElementNS(SVG_NS, "circle");
      circle.setAttribute("cx", String(x));
      circle.setAttribute("cy", String(y));
      circle.setAttribute("r", String(NODE_RADIUS));
      circle.setAttribute("fill", this.colors[role]);
      circle.setAttribute("data-node-id", nodeId);
      circle.setAttribute("data-role", role);
      circle.setAttribute("class", `node ${role}${nodeId === selected ? " selected" : ""}`);
      this.svg.appendChild(circle);

      const text = document.createElementNS(SVG_NS, "text");
      text.setAttribute("x", String(x));
      text.setAttribute("y", String(y + 4));
      text.setAttribute("text-anchor", "middle");
      text.setAttribute("data-label-for", nodeId);
      text.textContent = nodeLabel(doc, nodeId);
      this.svg.appendChild(text);
    }
  }

  private moveNode(nodeId: string, x: number, y: number): void {
    this.positions[nodeId] = [x, y];
    const circle = this.svg.querySelector(`circle[data-node-id="${nodeId}"]`);
    circle?.setAttribute("cx", String(x));
    circle?.setAttribute("cy", String(y));
    const label = this.svg.querySelector(`text[data-label-for="${nodeId}"]`);
    label?.setAttribute("x", String(x));
    label?.setAttribute("y", String(y + 4));
    this.svg
      .querySelectorAll(`line[data-edge-from="${nodeId}"]`)
      .forEach((line) => {
        line.setAttribute("x1", String(x));
        line.setAttribute("y1", String(y));
      });
    this.svg
      .querySelectorAll(`line[data-edge-to="${nodeId}"]`)
      .forEach((line) => {
        line.setAttribute("x2", String(x));
        line.setAttribute("y2", String(y));
      });
  }
}
