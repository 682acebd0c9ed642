import init, { kernel_sweep, metric_sweep, peak_grid, chart_summary } from "./pkg/levirank_web.js";

const $ = (id) => document.getElementById(id);
const canvas = $("plot");
const ctx = canvas.getContext("2d");
const COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"];

function coords() {
  const out = [];
  for (const tok of $("point").value.trim().split(/\s+/)) {
    const [re, im = "0"] = tok.split(",");
    out.push(Number(re), Number(im));
  }
  if (out.some(Number.isNaN)) throw new Error("point: use `x` or `x,y` per coordinate");
  return new Float64Array(out);
}

function sweepArgs() {
  return [Number($("dmin").value), Number($("dmax").value), Number($("count").value), $("method").value, Number($("degree").value)];
}

function status(msg, isErr = false) {
  $("status").textContent = msg;
  $("status").className = isErr ? "err" : "";
}

// log-log plot of several series; each series is {label, xs, ys, dash?}
function logPlot(series, xlabel, ylabel) {
  const W = canvas.width, H = canvas.height, L = 60, R = 15, T = 15, B = 45;
  ctx.clearRect(0, 0, W, H);
  const lx = [], ly = [];
  for (const s of series) s.xs.forEach((x, i) => { if (x > 0 && s.ys[i] > 0) { lx.push(Math.log10(x)); ly.push(Math.log10(s.ys[i])); } });
  if (!lx.length) return;
  let [x0, x1, y0, y1] = [Math.min(...lx), Math.max(...lx), Math.min(...ly), Math.max(...ly)];
  if (x1 === x0) x1 += 1;
  if (y1 === y0) y1 += 1;
  const px = (x) => L + (Math.log10(x) - x0) / (x1 - x0) * (W - L - R);
  const py = (y) => H - B - (Math.log10(y) - y0) / (y1 - y0) * (H - T - B);
  ctx.strokeStyle = "#999";
  ctx.strokeRect(L, T, W - L - R, H - T - B);
  ctx.fillStyle = "#444";
  ctx.font = "12px sans-serif";
  for (let e = Math.ceil(x0); e <= Math.floor(x1); e++) ctx.fillText(`1e${e}`, px(10 ** e) - 12, H - B + 16);
  for (let e = Math.ceil(y0); e <= Math.floor(y1); e++) ctx.fillText(`1e${e}`, 8, py(10 ** e) + 4);
  ctx.fillText(xlabel, W / 2, H - 8);
  ctx.save();
  ctx.translate(14, H / 2);
  ctx.rotate(-Math.PI / 2);
  ctx.fillText(ylabel, 0, 0);
  ctx.restore();
  const legend = [];
  series.forEach((s, k) => {
    const col = COLORS[k % COLORS.length];
    ctx.strokeStyle = col;
    ctx.setLineDash(s.dash ? [5, 4] : []);
    ctx.beginPath();
    let started = false;
    s.xs.forEach((x, i) => {
      const y = s.ys[i];
      if (!(x > 0 && y > 0)) return;
      started ? ctx.lineTo(px(x), py(y)) : ctx.moveTo(px(x), py(y));
      started = true;
    });
    ctx.stroke();
    ctx.fillStyle = col;
    s.xs.forEach((x, i) => { if (x > 0 && s.ys[i] > 0) ctx.fillRect(px(x) - 2, py(s.ys[i]) - 2, 4, 4); });
    legend.push(`<div style="color:${col}">${s.dash ? "- -" : "──"} ${s.label}</div>`);
  });
  ctx.setLineDash([]);
  $("legend").innerHTML = legend.join("");
}

function heatmap(values, n, halfWidth) {
  const W = canvas.width, H = canvas.height, S = Math.min(W, H) - 20;
  ctx.clearRect(0, 0, W, H);
  const img = ctx.createImageData(n, n);
  values.forEach((v, i) => {
    const o = 4 * i;
    if (Number.isNaN(v)) { img.data.set([235, 235, 235, 255], o); return; }
    const t = Math.max(0, Math.min(1, v));
    img.data.set([Math.round(255 * t), Math.round(80 + 100 * t), Math.round(255 * (1 - t)), 255], o);
  });
  const off = new OffscreenCanvas(n, n);
  off.getContext("2d").putImageData(img, 0, 0);
  ctx.imageSmoothingEnabled = false;
  ctx.drawImage(off, 10, 10, S, S);
  ctx.strokeStyle = "#000";
  ctx.strokeRect(10 + S / 2 - 3, 10 + S / 2 - 3, 6, 6);
  $("legend").innerHTML = `|h| on z₁ = p₁ + x + iy, |x|,|y| ≤ ${halfWidth}; blue 0, red 1, grey outside the certified region`;
}

function runKernel() {
  const r = JSON.parse(kernel_sweep($("domain").value, coords(), ...sweepArgs()));
  const series = [];
  if (r.fit) {
    const f = r.fit;
    series.push({ label: `K(p − δν), ${f.method}`, xs: f.deltas, ys: f.values });
    series.push({ label: `fit slope ${f.slope.toFixed(3)}`, xs: f.deltas, ys: f.deltas.map((d) => 10 ** (f.intercept + f.slope * Math.log10(d))), dash: true });
  }
  logPlot(series, "δ", "K");
  const v = r.verdict.verdict === "rank" ? `rank ${r.verdict.detail}` : r.verdict.verdict;
  $("summary").textContent = `verdict: ${v}\nLevi rank (direct): ${r.direct_rank}\n` +
    (r.fit ? `slope ${r.fit.slope.toFixed(4)} (predicted ${r.fit.predicted})\nresidual ${r.fit.residual.toExponential(2)}` : "no fit") +
    (r.verdict.detail && r.verdict.verdict === "inconclusive" ? `\n${r.verdict.detail}` : "");
}

function runMetric() {
  const r = JSON.parse(metric_sweep($("domain").value, coords(), ...sweepArgs(), $("kob").checked));
  const series = [];
  const lines = [`C₃ = ${r.c3.toExponential(3)}, band of F²/(M + C₃|X|²) = ${r.comparability_band.toFixed(3)}`];
  for (const f of r.fits) {
    const b = f.bergman;
    series.push({ label: `F_B² ${f.direction.label}`, xs: b.deltas, ys: b.values });
    series.push({ label: `M ${f.direction.label}`, xs: b.deltas, ys: f.comparability, dash: true });
    lines.push(`${f.direction.label}: slope ${b.slope.toFixed(3)} (expected ${f.direction.expected_slope})`);
    if (f.kobayashi) {
      const k = f.kobayashi;
      lines.push(`  Kobayashi upper/lower ≤ ${k.max_ratio.toFixed(3)}${k.inconclusive ? " (inconclusive)" : ""}`);
    }
  }
  logPlot(series, "δ", "F² and M");
  $("summary").textContent = lines.join("\n");
}

function runPeak() {
  const d = $("domain").value, p = coords();
  const s = JSON.parse(chart_summary(d, p));
  const hw = Math.min(0.25, 2 * s.peak_radius);
  const n = 121;
  heatmap(peak_grid(d, p, 0, hw, n), n, hw.toPrecision(3));
  $("summary").textContent = `λ = [${s.lambda.map((x) => x.toFixed(6)).join(", ")}]\nLevi rank ${s.levi_rank}, leaf dimension ${s.leaf_dimension}\n` +
    `chart radius ${s.valid_radius.toExponential(3)}, peak radius ${s.peak_radius.toExponential(3)}`;
}

function wrap(fn) {
  return () => {
    status("running…");
    setTimeout(() => {
      try { fn(); status(""); } catch (e) { status(e.message ?? String(e), true); }
    }, 10);
  };
}

await init();
$("domain").addEventListener("change", (e) => { $("point").value = e.target.selectedOptions[0].dataset.point; });
$("kernel").addEventListener("click", wrap(runKernel));
$("metric").addEventListener("click", wrap(runMetric));
$("peak").addEventListener("click", wrap(runPeak));
status("ready");
