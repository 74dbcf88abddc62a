// Wire formats of the scenegrapher HTTP API.

export interface AttributeEntry {
  id: string;
  label: string;
  position_override?: [number, number];
}

export interface ObjectEntry {
  id: string;
  category: string;
  attributes: AttributeEntry[];
  position_override?: [number, number];
}

export interface RelationshipEntry {
  id: string;
  subject: string;
  predicate: string;
  object: string;
  position_override?: [number, number];
}

export interface GraphDocument {
  schema_version: number;
  image_ref: string | null;
  objects: ObjectEntry[];
  relationships: RelationshipEntry[];
  collapsed: string[];
}

export interface LayoutMap {
  positions: Record<string, [number, number]>;
  edges: [string, string, string][];
}

export interface Effect {
  kind: string;
  created: string[];
  removed: string[];
  updated: string[];
  pending: [string, string, string][];
}

export interface Template {
  template_id: string;
  category: string;
  attributes: string[];
  relationship_patterns: [string, string, string][];
}

export interface NodeColors {
  object: string;
  relationship: string;
  attribute: string;
}

export interface ServiceInfo {
  schema_version: number;
  colors: NodeColors;
  layout: { min_sep: number; row_height: number; origin: [number, number] };
  vocabulary_panel_size: number;
}

export type CommandPayload =
  | { op: "add_object"; category: string }
  | { op: "add_attribute"; object: string; label: string }
  | { op: "add_relationship"; subject: string; object: string; predicate: string }
  | { op: "remove"; id: string }
  | { op: "clone"; source: string }
  | { op: "drag"; id: string; position: [number, number] }
  | { op: "collapse"; id: string }
  | { op: "expand"; id: string }
  | { op: "apply_template"; template_id: string; target: string };

export type NodeRole = "object" | "attribute" | "relationship";

export type ExportFormat = "json" | "svg" | "sg2im";
