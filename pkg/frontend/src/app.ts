/** Browser entry point: bind the controller to the document. */

import { ApiClient } from "./api.js";
import { ReviewController } from "./controller.js";
import { renderApp } from "./render.js";
import { mount } from "./vdom.js";

const VERSION_POLL_MS = 5000;

function boot(): void {
    const container = document.getElementById("app");
    if (container === null) {
        return;
    }
    const controller: ReviewController = new ReviewController(
        new ApiClient(),
        state => mount(renderApp(state, controller.handlers), container),
    );
    void controller.start();
    // Cheap staleness detection: ask for the version now and then, so a
    // KB changed elsewhere flips this screen into its stale mode.
    window.setInterval(() => void controller.checkVersion(), VERSION_POLL_MS);
}

boot();
