// Single-module demo page: edit on the left, live widgets on the right.
// Build with `npm run build:app`, serve the engine with `babylang serve`.
import { EngineClient } from "../dist/client.js";
import { applyReport } from "../dist/state.js";
import { renderDocument } from "../dist/render.js";
import { toolbarActions } from "../dist/toolbar.js";
const MODULE = "scratch";
const INITIAL = `/*@example {"name":"Not Found","enabled":true,"this":"null","params":{"key":"\\"g\\"","array":"[\\"a\\",\\"b\\",\\"c\\",\\"d\\",\\"e\\",\\"f\\"]"}}*/
function binarySearch(key, array) {
    var low = 0;
    var high = array.length - 1;
    /*@slider*/
    while (low <= high) {
        var /*@probe*/mid = (low + high) >> 1;
        var /*@probe*/value = array[mid];
        if (value === key) {
            return mid;
        }
        if (value < key) {
            low = mid + 1;
        } else {
            high = mid - 1;
        }
    }
    return -1;
}
`;
const editor = document.getElementById("editor");
const view = document.getElementById("view");
const toolbar = document.getElementById("toolbar");
editor.value = INITIAL;
let lastReport = null;
const selection = {};
function redraw() {
    if (!lastReport || !(MODULE in lastReport.modules))
        return;
    const doc = applyReport(MODULE, lastReport, selection);
    view.innerHTML = renderDocument(doc);
    for (const input of view.querySelectorAll("input[type=range]")) {
        input.addEventListener("input", () => {
            selection[input.dataset.slider ?? ""] = Number(input.value);
            redraw();
        });
        input.addEventListener("dblclick", () => {
            delete selection[input.dataset.slider ?? ""];
            redraw();
        });
    }
}
const socket = new WebSocket(`ws://${location.hostname}:8765/ws`);
const client = new EngineClient(socket, {
    onReport: (report) => {
        lastReport = report;
        redraw();
    },
    onError: (message) => console.warn("engine:", message),
});
socket.addEventListener("open", () => {
    client.openSession({ modules: { [MODULE]: editor.value },
        config: { debounce_ms: 400 } });
    client.evaluate();
});
editor.addEventListener("input", () => {
    client.updateSource(MODULE, editor.value);
});
editor.addEventListener("click", () => {
    if (!lastReport)
        return;
    const before = editor.value.slice(0, editor.selectionStart);
    const line = before.split("\n").length;
    const column = before.length - before.lastIndexOf("\n") - 1;
    const buttons = toolbarActions(lastReport.modules[MODULE], line, column);
    toolbar.innerHTML = buttons.length
        ? buttons.map((b) => `<button data-kind="${b.kind}">${b.label}</button>`).join("")
        : "<i>no annotation applies here</i>";
    for (const el of toolbar.querySelectorAll("button")) {
        el.addEventListener("click", () => {
            if (el.dataset.kind === "probe" || el.dataset.kind === "slider") {
                client.setAnnotation(MODULE, line, el.dataset.kind);
            }
        });
    }
});
