/** Non-blocking notifications; errors name the offending node. */
export class Toaster {
  private host: HTMLElement;

  constructor(parent: HTMLElement) {
    this.host = document.createElement("div");
    this.host.id = "toasts";
    parent.appendChild(this.host);
  }

  show(message: string, kind: "info" | "error" = "info", ttlMs = 4000): void {
    const toast = document.createElement("div");
    toast.className = `toast ${kind}`;
    toast.textContent = message;
    this.host.appendChild(toast);
    setTimeout(() => toast.remove(), ttlMs);
  }
}
