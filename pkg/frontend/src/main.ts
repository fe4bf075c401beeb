import { initApp } from "./app.js";

// Served by the game service under /app the API shares the origin, so
// the default empty base works; ?api=<origin> points elsewhere.
const base = new URLSearchParams(window.location.search).get("api") ?? "";

const root = document.querySelector<HTMLElement>("#app");
if (root === null) throw new Error("missing #app root element");
initApp(root, { baseUrl: base });
