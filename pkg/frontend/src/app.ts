import { ApiClient, ApiError } from "./api.js";
import { GraphCanvas } from "./canvas.js";
import { VocabularyPanel } from "./panel.js";
import { PromptBox } from "./prompt.js";
import { initialState, type CanvasState } from "./state.js";
import { Toaster } from "./toast.js";
import type { CommandPayload, ExportFormat } from "./types.js";

export type DownloadFn = (filename: string, bytes: Uint8Array, contentType: string) => void;

export const PANEL_KEY = "v";

const browserDownload: DownloadFn = (filename, bytes, contentType) => {
  const blob = new Blob([bytes as BlobPart], { type: contentType });
  const url = URL.createObjectURL(blob);
  const anchor = document.createElement("a");
  anchor.href = url;
  anchor.download = filename;
  anchor.click();
  URL.revokeObjectURL(url);
};

const EXPORT_FILENAMES: Record<ExportFormat, string> = {
  json: "scene.sg.json",
  svg: "scene.svg",
  sg2im: "scene.sg2im.json",
};

/** Task image on the left, live scene graph on the right; every edit round-trips
 * through the service. */
export class App {
  state: CanvasState = initialState();
  canvas: GraphCanvas;
  panel: VocabularyPanel;
  prompt: PromptBox;
  toaster: Toaster;
  private download: DownloadFn;

  constructor(
    private root: HTMLElement,
    private api: ApiClient,
    options: { download?: DownloadFn } = {},
  ) {
    this.download = options.download ?? browserDownload;
    root.innerHTML = "";

    const header = document.createElement("header");
    header.id = "toolbar";
    root.appendChild(header);
    this.buildToolbar(header);

    const main = document.createElement("main");
    root.appendChild(main);

    const imagePane = document.createElement("aside");
    imagePane.id = "image-pane";
    const imageSelect = document.createElement("select");
    imageSelect.id = "image-select";
    const image = document.createElement("img");
    image.id = "task-image";
    image.alt = "task image";
    imagePane.append(imageSelect, image);
    main.appendChild(imagePane);
    imageSelect.addEventListener("change", () => {
      image.src = this.api.imageUrl(imageSelect.value);
    });

    const canvasHost = document.createElement("div");
    canvasHost.id = "canvas-host";
    main.appendChild(canvasHost);
    this.canvas = new GraphCanvas(canvasHost, {
      onBackgroundContext: () =>
        this.prompt.open("New object category", (category) =>
          this.command({ op: "add_object", category }),
        ),
      onObjectContext: (objectId) =>
        this.prompt.open(`Attribute for ${objectId}`, (label) =>
          this.command({ op: "add_attribute", object: objectId, label }),
        ),
      onObjectClick: (objectId) => this.pairClick(objectId),
      onNodeDragEnd: (nodeId, x, y) =>
        this.command({ op: "drag", id: nodeId, position: [x, y] }),
      onZoomChange: () => {
        this.state.zoom = this.canvas.zoom;
      },
    });

    this.panel = new VocabularyPanel(main, (label) => {
      if (this.prompt.isOpen) {
        this.prompt.prefill(label);
      } else {
        this.toaster.show(`"${label}" copied nowhere: open a prompt first`, "info");
      }
    });

    this.toaster = new Toaster(root);
    this.prompt = new PromptBox(root);

    document.addEventListener("keydown", (event) => {
      const inInput = (event.target as HTMLElement)?.tagName === "INPUT";
      if (event.key === PANEL_KEY && !inInput) {
        this.panel.toggle();
        this.state.panelVisible = this.panel.visible;
      }
      if (event.key === "Escape") {
        if (this.state.pendingSource) {
          this.state.pendingSource = null;
          this.toaster.show("relationship cancelled");
          this.rerender();
        }
        this.prompt.close();
      }
    });
  }

  private buildToolbar(header: HTMLElement): void {
    const button = (id: string, label: string, onClick: () => void) => {
      const el = document.createElement("button");
      el.id = id;
      el.textContent = label;
      el.addEventListener("click", onClick);
      header.appendChild(el);
      return el;
    };
    button("btn-new-graph", "new graph", () => void this.newGraph());
    button("btn-undo", "undo", () => void this.undo());
    button("btn-clone", "clone", () => {
      const selected = this.requireSelected();
      if (selected) void this.command({ op: "clone", source: selected });
    });
    button("btn-collapse", "collapse", () => {
      const selected = this.requireSelected();
      if (selected) void this.command({ op: "collapse", id: selected });
    });
    button("btn-expand", "expand", () => {
      const selected = this.requireSelected();
      if (selected) void this.command({ op: "expand", id: selected });
    });
    button("btn-store-template", "store template", () => void this.storeTemplate());
    button("btn-apply-template", "apply template", () => {
      const selected = this.requireSelected();
      if (!selected) return;
      this.prompt.open(`Template category for ${selected}`, (templateId) =>
        this.command({ op: "apply_template", template_id: templateId, target: selected }),
      );
    });
    button("btn-save-json", "save JSON", () => void this.saveExport("json"));
    button("btn-save-svg", "save SVG", () => void this.saveExport("svg"));
    button("btn-export-sg2im", "export sg2im", () => void this.saveExport("sg2im"));
  }

  async init(): Promise<void> {
    const info = await this.api.serviceInfo();
    this.canvas.setColors(info.colors);
    const k = info.vocabulary_panel_size;
    const [attributes, predicates] = await Promise.all([
      this.api.vocabulary("attributes", k),
      this.api.vocabulary("predicates", k),
    ]);
    this.panel.load(attributes, predicates);
    const images = await this.api.listImages();
    const select = this.root.querySelector<HTMLSelectElement>("#image-select")!;
    for (const name of images) {
      const option = document.createElement("option");
      option.value = name;
      option.textContent = name;
      select.appendChild(option);
    }
    if (images.length) {
      select.value = images[0];
      select.dispatchEvent(new Event("change"));
    }
  }

  async newGraph(): Promise<string> {
    const select = this.root.querySelector<HTMLSelectElement>("#image-select")!;
    const { graph_id } = await this.api.createGraph(select.value || undefined);
    await this.openGraph(graph_id);
    return graph_id;
  }

  async openGraph(graphId: string): Promise<void> {
    this.state = { ...initialState(), graphId, panelVisible: this.state.panelVisible };
    await this.refresh();
  }

  /** Refetch document + layout and redraw; the UI holds no other graph state. */
  async refresh(): Promise<void> {
    if (!this.state.graphId) return;
    const [doc, layout] = await Promise.all([
      this.api.getGraph(this.state.graphId),
      this.api.getLayout(this.state.graphId),
    ]);
    this.state.document = doc;
    this.state.layout = layout;
    if (this.state.selected && !(this.state.selected in layout.positions)) {
      this.state.selected = null;
    }
    if (this.state.pendingSource && !(this.state.pendingSource in layout.positions)) {
      this.state.pendingSource = null;
    }
    this.rerender();
  }

  rerender(): void {
    if (this.state.document && this.state.layout) {
      this.canvas.render(this.state.document, this.state.layout, this.state.selected);
    }
  }

  async command(payload: CommandPayload): Promise<void> {
    if (!this.state.graphId) {
      this.toaster.show("create or open a graph first", "error");
      return;
    }
    try {
      await this.api.postCommand(this.state.graphId, payload);
    } catch (error) {
      this.surface(error);
    }
    // success and rollback look the same: re-sync with the server
    await this.refresh();
  }

  async undo(): Promise<void> {
    if (!this.state.graphId) return;
    try {
      await this.api.undo(this.state.graphId);
    } catch (error) {
      this.surface(error);
    }
    await this.refresh();
  }

  async storeTemplate(): Promise<void> {
    const selected = this.requireSelected();
    if (!selected || !this.state.graphId) return;
    try {
      const template = await this.api.storeTemplate(this.state.graphId, selected);
      this.toaster.show(`stored template "${template.template_id}"`);
    } catch (error) {
      this.surface(error);
    }
  }

  async saveExport(format: ExportFormat): Promise<void> {
    if (!this.state.graphId) return;
    const { bytes, contentType } = await this.api.exportGraph(this.state.graphId, format);
    this.download(EXPORT_FILENAMES[format], bytes, contentType);
  }

  private pairClick(objectId: string): void {
    this.state.selected = objectId;
    if (this.state.pendingSource === null) {
      this.state.pendingSource = objectId;
      this.rerender();
      return;
    }
    if (this.state.pendingSource === objectId) {
      // clicking the same node twice cancels: self-loops are impossible
      this.state.pendingSource = null;
      this.toaster.show(`relationship cancelled: ${objectId} clicked twice`);
      this.rerender();
      return;
    }
    const subject = this.state.pendingSource;
    this.state.pendingSource = null;
    this.prompt.open(`Predicate ${subject} -> ${objectId}`, (predicate) =>
      this.command({ op: "add_relationship", subject, object: objectId, predicate }),
    );
    this.rerender();
  }

  private requireSelected(): string | null {
    if (!this.state.selected) {
      this.toaster.show("select an object first (left-click it)", "error");
      return null;
    }
    return this.state.selected;
  }

  private surface(error: unknown): void {
    if (error instanceof ApiError) {
      const who = error.nodeId ? ` [${error.nodeId}]` : "";
      this.toaster.show(`${error.code}${who}: ${error.message}`, "error");
    } else {
      this.toaster.show(String(error), "error");
    }
  }
}
