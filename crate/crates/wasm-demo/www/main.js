// Build the bindings first: wasm-pack build --target web --out-dir www/pkg
import init, { distribution, moments, char_sum_of } from "./pkg/hyperstat_wasm.js";

const COLORS = ["#4a7fb5", "#e39b3b", "#5a5"];

function read(section) {
  const v = {};
  for (const input of section.querySelectorAll("input")) {
    v[input.name] = input.type === "number" ? Number(input.value) : input.value;
  }
  return v;
}

function show(section, text, isError = false) {
  const out = section.querySelector(".out");
  out.textContent = text;
  out.className = isError ? "out error" : "out";
}

function axes(ctx, w, h, pad, yMax) {
  ctx.clearRect(0, 0, w, h);
  ctx.strokeStyle = "#999";
  ctx.beginPath();
  ctx.moveTo(pad, pad / 2);
  ctx.lineTo(pad, h - pad);
  ctx.lineTo(w - pad / 2, h - pad);
  ctx.stroke();
  ctx.fillStyle = "#555";
  ctx.font = "11px sans-serif";
  ctx.fillText(yMax.toPrecision(3), 2, pad / 2 + 4);
  ctx.fillText("0", pad - 10, h - pad + 4);
}

// Grouped bars: one group per label, one bar per series.
function bars(canvas, labels, series) {
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  const pad = 40;
  const yMax = Math.max(...series.flat().filter(Number.isFinite)) || 1;
  axes(ctx, w, h, pad, yMax);
  const group = (w - 1.5 * pad) / labels.length;
  const bw = Math.max(1, (group * 0.8) / series.length);
  labels.forEach((label, i) => {
    const x0 = pad + i * group + group * 0.1;
    series.forEach((values, j) => {
      const v = values[i];
      if (!Number.isFinite(v)) return;
      const bh = (v / yMax) * (h - 1.5 * pad);
      ctx.fillStyle = COLORS[j];
      ctx.fillRect(x0 + j * bw, h - pad - bh, bw - 1, bh);
    });
    if (labels.length <= 40 || i % Math.ceil(labels.length / 40) === 0) {
      ctx.fillStyle = "#333";
      ctx.fillText(String(label), x0, h - pad + 14);
    }
  });
}

function runDistribution(section) {
  const v = read(section);
  const r = JSON.parse(distribution(v.p, v.k, v.d, v.samples, v.seed));
  // Trim the empty tails so the bars stay readable for large q.
  const shown = r.bars.filter((b) => b.count > 0 || b.model > 1e-4);
  bars(section.querySelector("canvas"), shown.map((b) => b.s), [shown.map((b) => b.empirical), shown.map((b) => b.model)]);
  show(section, `q=${r.q} d=${r.d} ${r.mode}, N=${r.total}\nTV distance ${r.tv_distance.toExponential(3)}, max relative error ${r.max_rel_err.toExponential(3)}`);
}

function runMoments(section) {
  const v = read(section);
  const r = JSON.parse(moments(v.p, v.k, v.d, v.samples, v.seed, v.kmax));
  const pts = r.points;
  bars(section.querySelector("canvas"), pts.map((p) => "k=" + p.k), [
    pts.map((p) => Math.abs(p.empirical)),
    pts.map((p) => Math.abs(p.model)),
    pts.map((p) => p.gaussian),
  ]);
  const rows = pts.map((p) => `k=${p.k}  empirical ${p.empirical.toFixed(6)}  model ${p.model.toFixed(6)}  Gaussian ${p.gaussian}` + (p.std_err ? `  se ${p.std_err.toExponential(2)}` : ""));
  show(section, `q=${r.q} d=${r.d} ${r.mode}, N=${r.total}\n` + rows.join("\n"));
}

function runSingle(section) {
  const v = read(section);
  const r = JSON.parse(char_sum_of(v.p, v.k, v.coeffs));
  show(
    section,
    [
      `F = ${r.polynomial} over F_${r.q}, degree ${r.degree}, square-free: ${r.squarefree}`,
      `F(x) for x = 0..${r.q - 1}: ${r.values.join(" ")}`,
      `chi(F(x)): ${r.chi.join(" ")}`,
      `S(F) = ${r.char_sum}, points q+1+S = ${r.point_count}, Weil bound ${r.weil_bound.toFixed(3)}`,
    ].join("\n"),
  );
}

function wire(id, handler) {
  const section = document.getElementById(id);
  section.querySelector("button").addEventListener("click", () => {
    try {
      handler(section);
    } catch (e) {
      show(section, String(e), true);
    }
  });
  return section;
}

await init();
runDistribution(wire("dist", runDistribution));
runMoments(wire("moments", runMoments));
runSingle(wire("single", runSingle));
