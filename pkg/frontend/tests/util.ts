import { expect } from "vitest";
import { ApiClient } from "../src/api.js";
import { App, type DownloadFn } from "../src/app.js";

export async function until(
  condition: () => boolean,
  what = "condition",
  timeoutMs = 8000,
): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (Date.now() < deadline) {
    if (condition()) return;
    await new Promise((r) => setTimeout(r, 20));
  }
  expect.fail(`timed out waiting for ${what}`);
}

export interface Download {
  filename: string;
  bytes: Uint8Array;
  contentType: string;
}

export interface Harness {
  app: App;
  api: ApiClient;
  root: HTMLElement;
  downloads: Download[];
  graphId: string;
}

export async function makeApp(base: string): Promise<Harness> {
  document.body.innerHTML = "";
  const root = document.createElement("div");
  root.id = "app";
  document.body.appendChild(root);
  const api = new ApiClient(base);
  const downloads: Download[] = [];
  const download: DownloadFn = (filename, bytes, contentType) =>
    downloads.push({ filename, bytes, contentType });
  const app = new App(root, api, { download });
  await app.init();
  const graphId = await app.newGraph();
  return { app, api, root, downloads, graphId };
}

export function circle(root: HTMLElement, nodeId: string): SVGCircleElement | null {
  return root.querySelector(`circle[data-node-id="${nodeId}"]`);
}

export function rightClick(target: Element, clientX = 50, clientY = 50): void {
  target.dispatchEvent(
    new MouseEvent("contextmenu", { bubbles: true, cancelable: true, clientX, clientY }),
  );
}

export function leftClick(target: Element): void {
  target.dispatchEvent(new MouseEvent("click", { bubbles: true, cancelable: true }));
}

export function typeInPrompt(root: HTMLElement, value: string): void {
  const input = root.querySelector<HTMLInputElement>("#prompt-input")!;
  input.value = value;
  root.querySelector<HTMLButtonElement>("#prompt-ok")!.click();
}

export function pressKey(key: string): void {
  document.dispatchEvent(new KeyboardEvent("keydown", { key, bubbles: true }));
}
