/** Common attributes/predicates reference panel.

Hidden initially (no hints until asked); toggled by a key; auto-hides after
an entry is used.  Clicking an entry pre-fills the active prompt.
*/
export class VocabularyPanel {
  private root: HTMLElement;

  constructor(
    parent: HTMLElement,
    private onPick: (label: string) => void,
  ) {
    this.root = document.createElement("aside");
    this.root.id = "vocab-panel";
    this.root.className = "hidden";
    parent.appendChild(this.root);
  }

  load(attributes: string[], predicates: string[]): void {
    this.root.textContent = "";
    this.root.append(
      this.section("Common attributes", attributes, "attribute"),
      this.section("Common relationships", predicates, "predicate"),
    );
  }

  private section(heading: string, labels: string[], kind: string): HTMLElement {
    const wrap = document.createElement("section");
    const title = document.createElement("h3");
    title.textContent = heading;
    wrap.appendChild(title);
    const list = document.createElement("ul");
    list.setAttribute("data-kind", kind);
    for (const label of labels) {
      const item = document.createElement("li");
      item.textContent = label;
      item.setAttribute("data-vocab", label);
      item.addEventListener("click", () => {
        this.onPick(label);
        this.hide(); // automatically closed after use
      });
      list.appendChild(item);
    }
    wrap.appendChild(list);
    return wrap;
  }

  get visible(): boolean {
    return !this.root.classList.contains("hidden");
  }

  toggle(): void {
    this.root.classList.toggle("hidden");
  }

  hide(): void {
    this.root.classList.add("hidden");
  }

  entryCount(kind: "attribute" | "predicate"): number {
    return this.root.querySelectorAll(`ul[data-kind="${kind}"] li`).length;
  }
}
