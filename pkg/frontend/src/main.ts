import { ApiClient } from "./api.js";
import { ExplorerApp } from "./ui.js";

const root = document.querySelector<HTMLElement>("#app");
if (!root) {
  throw new Error("missing #app mount point");
}
const app = new ExplorerApp(new ApiClient(""), root);
void app.start();
