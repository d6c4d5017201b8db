import { mount } from "./app.js";

const params = new URLSearchParams(window.location.search);
const root = document.getElementById("app");
if (!root) throw new Error("missing #app container");
mount(root, { annotatorId: params.get("annotator") ?? "anonymous" });
