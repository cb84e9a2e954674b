import { SimilesApi } from "./api";
import { createApp } from "./app";

// ?api=http://host:port overrides the default service location
const params = new URLSearchParams(window.location.search);
const base =
  params.get("api") ?? `${window.location.protocol}//${window.location.hostname}:8337`;

const root = document.getElementById("root");
if (root === null) {
  throw new Error("missing #root element");
}
createApp(root, new SimilesApi(base));
