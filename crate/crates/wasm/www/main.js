// Generated by `wasm-bindgen --target web` into ./pkg (see build.sh).
import init, { sampleDataset, presetParams, embed, sweep } from "./pkg/bifold_wasm.js";

const $ = (id) => document.getElementById(id);
const LOG_SLIDERS = ["alpha_x", "alpha_y", "alpha_xy"];

let dataset = "";
let pending = 0;

function status(text, isError = false) {
  $("status").textContent = text;
  $("status").classList.toggle("error", isError);
}

function fmt(v) {
  return Math.abs(v) >= 1e-3 || v === 0 ? v.toPrecision(4) : v.toExponential(2);
}

function settings() {
  const s = {
    method: $("method").value,
    restarts: Number($("restarts").value),
    show_edges: $("edges").checked,
    show_labels: $("labels").checked,
  };
  for (const id of LOG_SLIDERS) s[id] = 10 ** Number($(id).value);
  s.beta = Number($("beta").value);
  return s;
}

function showValues() {
  for (const id of LOG_SLIDERS) $(id + "-val").textContent = fmt(10 ** Number($(id).value));
  $("beta-val").textContent = fmt(Number($("beta").value));
  $("restarts-val").textContent = $("restarts").value;
}

function applyPresets() {
  const p = JSON.parse(presetParams(dataset, $("method").value));
  for (const id of LOG_SLIDERS) $(id).value = Math.log10(p[id]);
  $("beta").value = p.beta;
  showValues();
}

// Coalesces slider drags into one embedding per animation frame.
function schedule() {
  showValues();
  if (pending) return;
  pending = requestAnimationFrame(() => {
    pending = 0;
    runEmbed();
  });
}

function runEmbed() {
  const t0 = performance.now();
  try {
    const out = JSON.parse(embed(dataset, JSON.stringify(settings())));
    $("plot").innerHTML = out.svg;
    const c = out.coordinates;
    const ms = (performance.now() - t0).toFixed(0);
    status(`${c.dataset}: stress ${fmt(c.stress)} after ${c.iterations} iterations` +
      `${c.converged ? "" : " (not converged)"}, ${ms} ms`);
  } catch (e) {
    // Keep the last good plot on screen.
    status(String(e.message ?? e), true);
  }
}

function drawSweep(result) {
  const W = 600, H = 200, pad = 36;
  const { dims, stresses } = result;
  const max = Math.max(...stresses) || 1;
  const x = (i) => pad + (i * (W - 2 * pad)) / Math.max(dims.length - 1, 1);
  const y = (s) => H - pad + 10 - (s / max) * (H - 2 * pad);
  const pts = stresses.map((s, i) => `${x(i).toFixed(1)},${y(s).toFixed(1)}`).join(" ");
  const ticks = dims.map((d, i) =>
    `<text x="${x(i)}" y="${H - 8}" text-anchor="middle">${d}</text>` +
    `<circle cx="${x(i)}" cy="${y(stresses[i])}" r="3"><title>dim ${d}: ${fmt(stresses[i])}</title></circle>`).join("");
  $("sweep").innerHTML =
    `<svg viewBox="0 0 ${W} ${H}" width="100%" height="100%" font-size="11">` +
    `<text x="${pad}" y="14">stress by dimension (max ${fmt(max)})</text>` +
    `<line x1="${pad}" y1="${H - pad + 10}" x2="${W - pad}" y2="${H - pad + 10}" stroke="#999"/>` +
    `<polyline points="${pts}" fill="none" stroke="#3b6fb6" stroke-width="2"/>${ticks}</svg>`;
}

function runSweep() {
  try {
    const s = settings();
    drawSweep(JSON.parse(sweep(dataset, JSON.stringify(s), Uint32Array.from([1, 2, 3, 4, 5, 6]))));
  } catch (e) {
    status(String(e.message ?? e), true);
  }
}

function loadDataset() {
  const text = $("data").value.trim();
  const candidate = text === "" ? sampleDataset() : text;
  try {
    presetParams(candidate, $("method").value);
  } catch (e) {
    status(String(e.message ?? e), true);
    return;
  }
  dataset = candidate;
  applyPresets();
  runEmbed();
  $("sweep").innerHTML = "";
}

await init();
dataset = sampleDataset();
for (const id of [...LOG_SLIDERS, "beta", "restarts"]) $(id).addEventListener("input", schedule);
for (const id of ["edges", "labels"]) $(id).addEventListener("change", schedule);
$("method").addEventListener("change", () => { applyPresets(); schedule(); });
$("reset").addEventListener("click", () => { applyPresets(); schedule(); });
$("run-sweep").addEventListener("click", runSweep);
$("load").addEventListener("click", loadDataset);
applyPresets();
runEmbed();
