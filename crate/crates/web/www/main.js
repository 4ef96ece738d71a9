// Expects the wasm-bindgen output in ./pkg (see the README for the build command).
import init, { pattern_svg, eval_sigma, simulate_cdf_svg } from "./pkg/rcs_web.js";

const $ = (id) => document.getElementById(id);

function show(el, fn) {
  try {
    el.innerHTML = fn();
  } catch (e) {
    el.innerHTML = `<p class="err">${String(e)}</p>`;
  }
}

function drawPattern() {
  const labels = [...document.querySelectorAll("input[name=pat]:checked")].map((c) => c.value);
  show($("pattern"), () => pattern_svg(labels.join(",")));
}

function drawSigma() {
  const f = Number($("ev-freq").value);
  const phi = Number($("ev-phi").value);
  const q = Number($("ev-q").value);
  $("ev-freq-v").textContent = f;
  $("ev-phi-v").textContent = phi;
  $("ev-q-v").textContent = q.toFixed(2);
  show($("ev-out"), () => {
    const r = JSON.parse(eval_sigma($("ev-target").value, f, phi, q));
    const row = (k, v) => `<tr><td>${k}</td><td>${v.toFixed(2)}</td></tr>`;
    return row("A (dBsm)", r.a_db) + row("B1 (dB)", r.b1_db) + row("B2 (dB)", r.b2_db) +
      row("σ (dBsm)", r.sigma_dbsm) +
      (r.extrapolated ? `<tr><td colspan="2" class="err">outside the 10 to 36 GHz fitted range</td></tr>` : "");
  });
}

function runSim() {
  $("sim").innerHTML = "<p>running…</p>";
  // let the status paint before the blocking call
  setTimeout(() => show($("sim"), () => simulate_cdf_svg(
    "uav,vehicle,human",
    Number($("sim-freq").value),
    Number($("sim-drops").value),
    Number($("sim-seed").value) >>> 0,
    $("sim-metric").value,
  )), 10);
}

await init();
document.querySelectorAll("input[name=pat]").forEach((c) => c.addEventListener("change", drawPattern));
["ev-target", "ev-freq", "ev-phi", "ev-q"].forEach((id) => $(id).addEventListener("input", drawSigma));
$("sim-run").addEventListener("click", runSim);
drawPattern();
drawSigma();
runSim();
