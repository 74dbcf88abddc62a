import type { GraphDocument, LayoutMap, NodeRole } from "./types.js";

// Everything the UI remembers between renders; the server owns the graph.
export interface CanvasState {
  graphId: string | null;
  document: GraphDocument | null;
  layout: LayoutMap | null;
  zoom: number;
  pan: { x: number; y: number };
  pendingSource: string | null; // object id after the first relationship click
  selected: string | null;
  panelVisible: boolean;
}

export function initialState(): CanvasState {
  return {
    graphId: null,
    document: null,
    layout: null,
    zoom: 1,
    pan: { x: 0, y: 0 },
    pendingSource: null,
    selected: null,
    panelVisible: false,
  };
}

export function nodeRole(doc: GraphDocument, nodeId: string): NodeRole | null {
  for (const obj of doc.objects) {
    if (obj.id === nodeId) return "object";
    if (obj.attributes.some((a) => a.id === nodeId)) return "attribute";
  }
  if (doc.relationships.some((r) => r.id === nodeId)) return "relationship";
  return null;
}

export function nodeLabel(doc: GraphDocument, nodeId: string): string {
  for (const obj of doc.objects) {
    if (obj.id === nodeId) return obj.id;
    const attr = obj.attributes.find((a) => a.id === nodeId);
    if (attr) return attr.label;
  }
  const rel = doc.relationships.find((r) => r.id === nodeId);
  return rel ? rel.predicate : nodeId;
}
