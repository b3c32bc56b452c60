// Entry point: register the session view and mount it on the page.

import { SessionViewElement } from "./components/session-view.js";

export { SessionViewElement };

const mount = document.querySelector("#app");
if (mount && !mount.querySelector(SessionViewElement.tag)) {
  const view = document.createElement(SessionViewElement.tag);
  // Same-origin by default; override with e.g. data-base-url="http://127.0.0.1:8000".
  const baseUrl = (mount as HTMLElement).dataset.baseUrl ?? "";
  view.setAttribute("base-url", baseUrl);
  mount.append(view);
}
