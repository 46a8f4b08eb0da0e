import { createApp } from "./app";
import "./style.css";

const root = document.getElementById("app");
if (!root) throw new Error("missing #app mount point");
void createApp(root, window.location.search).start();
