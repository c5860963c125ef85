import init, { scorePaper, evaluateCounts, signedRankTest } from "./pkg/percentile_impact_wasm.js";

const $ = (id) => document.getElementById(id);

function bind(button, output, run) {
  $(button).addEventListener("click", () => {
    const out = $(output);
    try {
      out.textContent = run();
      out.classList.remove("error");
    } catch (e) {
      out.textContent = String(e.message ?? e);
      out.classList.add("error");
    }
  });
}

await init();
$("status").textContent = "Ready.";

bind("score-run", "score-out", () => scorePaper(Number($("cites").value), $("refs").value));
bind("counts-run", "counts-out", () => evaluateCounts($("counts").value, $("counts-format").value));
bind("values-run", "values-out", () =>
  signedRankTest($("values").value, Number($("mu0").value), $("alternative").value));
