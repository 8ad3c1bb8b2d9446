import { ApiClient } from "./api.js";
import { App } from "./app.js";
import { toast } from "./toast.js";

const root = document.getElementById("app");
if (root) {
    const app = new App(root, new ApiClient(""));
    app.start().catch((err) => toast(`failed to start: ${err.message ?? err}`));
}
