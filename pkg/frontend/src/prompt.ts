/** In-page prompt box (not window.prompt) so panel picks can pre-fill it. */
export class PromptBox {
  private root: HTMLElement;
  private title: HTMLElement;
  private input: HTMLInputElement;
  private submit: ((value: string) => void) | null = null;

  constructor(parent: HTMLElement) {
    this.root = document.createElement("div");
    this.root.id = "prompt-box";
    this.root.className = "hidden";
    this.title = document.createElement("div");
    this.title.className = "prompt-title";
    this.input = document.createElement("input");
    this.input.type = "text";
    this.input.id = "prompt-input";
    const ok = document.createElement("button");
    ok.textContent = "OK";
    ok.id = "prompt-ok";
    const cancel = document.createElement("button");
    cancel.textContent = "Cancel";
    cancel.id = "prompt-cancel";
    this.root.append(this.title, this.input, ok, cancel);
    parent.appendChild(this.root);

    ok.addEventListener("click", () => this.confirm());
    cancel.addEventListener("click", () => this.close());
    this.input.addEventListener("keydown", (event) => {
      if (event.key === "Enter") this.confirm();
      if (event.key === "Escape") this.close();
    });
  }

  get isOpen(): boolean {
    return !this.root.classList.contains("hidden");
  }

  open(title: string, submit: (value: string) => void): void {
    this.title.textContent = title;
    this.input.value = "";
    this.submit = submit;
    this.root.classList.remove("hidden");
    this.input.focus();
  }

  prefill(value: string): void {
    if (this.isOpen) this.input.value = value;
  }

  confirm(): void {
    const value = this.input.value.trim();
    const submit = this.submit;
    this.close();
    if (submit && value) submit(value);
  }

  close(): void {
    this.root.classList.add("hidden");
    this.submit = null;
  }
}
