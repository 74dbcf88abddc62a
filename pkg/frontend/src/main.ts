import { ApiClient } from "./api.js";
import { App } from "./app.js";

// Served from the scenegrapher service (same origin), e.g. under /ui.
const api = new ApiClient("");
const root = document.getElementById("app")!;
const app = new App(root, api);

app
  .init()
  .then(async () => {
    const graphs = await api.listGraphs();
    if (graphs.length) {
      await app.openGraph(graphs[graphs.length - 1]);
    } else {
      await app.newGraph();
    }
  })
  .catch((error) => {
    app.toaster.show(`startup failed: ${error}`, "error", 10000);
  });
