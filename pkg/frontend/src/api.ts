import type {
  CommandPayload,
  Effect,
  ExportFormat,
  GraphDocument,
  LayoutMap,
  ServiceInfo,
  Template,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    public nodeId: string | null,
    message: string,
  ) {
    super(message);
  }
}

async function raiseForStatus(response: Response): Promise<void> {
  if (response.ok) return;
  let code = "http_error";
  let nodeId: string | null = null;
  let message = `${response.status} ${response.statusText}`;
  try {
    const body = await response.json();
    if (body && body.error) {
      code = body.error.code ?? code;
      nodeId = body.error.id ?? null;
      message = body.error.message ?? message;
    }
  } catch {
    // non-JSON error body: keep the status line
  }
  throw new ApiError(response.status, code, nodeId, message);
}

export class ApiClient {
  constructor(private base: string = "") {}

  private async requestJson<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await fetch(this.base + path, init);
    await raiseForStatus(response);
    return (await response.json()) as T;
  }

  createGraph(imageRef?: string): Promise<{ graph_id: string }> {
    return this.requestJson("/graphs", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(imageRef ? { image_ref: imageRef } : {}),
    });
  }

  listGraphs(): Promise<string[]> {
    return this.requestJson("/graphs");
  }

  getGraph(graphId: string): Promise<GraphDocument> {
    return this.requestJson(`/graphs/${graphId}`);
  }

  postCommand(graphId: string, command: CommandPayload, requestId?: string): Promise<Effect> {
    return this.requestJson(`/graphs/${graphId}/commands`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(requestId ? { command, request_id: requestId } : { command }),
    });
  }

  undo(graphId: string): Promise<Effect> {
    return this.requestJson(`/graphs/${graphId}/undo`, { method: "POST" });
  }

  getLayout(graphId: string): Promise<LayoutMap> {
    return this.requestJson(`/graphs/${graphId}/layout`);
  }

  async exportGraph(
    graphId: string,
    format: ExportFormat,
  ): Promise<{ bytes: Uint8Array; contentType: string }> {
    const response = await fetch(`${this.base}/graphs/${graphId}/export?format=${format}`);
    await raiseForStatus(response);
    const buffer = await response.arrayBuffer();
    return {
      bytes: new Uint8Array(buffer),
      contentType: response.headers.get("content-type") ?? "application/octet-stream",
    };
  }

  vocabulary(kind: "attributes" | "predicates", k?: number): Promise<string[]> {
    const query = k === undefined ? "" : `?k=${k}`;
    return this.requestJson(`/vocabulary/${kind}${query}`);
  }

  serviceInfo(): Promise<ServiceInfo> {
    return this.requestJson("/config");
  }

  metrics(graphId: string): Promise<Record<string, unknown>> {
    return this.requestJson(`/graphs/${graphId}/metrics`);
  }

  listImages(): Promise<string[]> {
    return this.requestJson("/images");
  }

  imageUrl(name: string): string {
    return `${this.base}/images/${encodeURIComponent(name)}`;
  }

  storeTemplate(graphId: string, objectId: string): Promise<Template> {
    return this.requestJson(`/graphs/${graphId}/templates`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ object_id: objectId }),
    });
  }

  listTemplates(): Promise<Template[]> {
    return this.requestJson("/templates");
  }
}
