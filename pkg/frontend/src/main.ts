import { ApiClient } from "./api";
import { ConsoleApp, mountConsole } from "./app";

const root = document.getElementById("console-root");
if (!root) throw new Error("missing #console-root element");

// Served next to the API (or through a dev proxy), so same-origin paths work.
const app = new ConsoleApp(new ApiClient(""));
mountConsole(root, app);
