import init, { gainMap, powerSweep, singleTarget } from "./pkg/reflector_wasm.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);
const FLOOR = -130;

function report(err) {
  $("status").textContent = err ? String(err) : "";
}

// Blue (weak) to yellow (strong).
function color(t) {
  const c = Math.max(0, Math.min(1, t));
  return `rgb(${Math.round(255 * c)},${Math.round(80 + 175 * c)},${Math.round(200 * (1 - c))})`;
}

function drawMap() {
  const rot = $("rotatable").checked;
  const flat = gainMap(rot, num("tx-x"), num("tx-y"), num("cx"), num("cy"), num("dx"), num("dy"), num("l1"), 1.0);
  const [nx, ny, count] = flat;
  const poses = [];
  for (let i = 0; i < count; i++) poses.push([flat[3 + 2 * i], flat[4 + 2 * i]]);
  const dbm = flat.subarray(3 + 2 * count);

  let lo = Infinity, hi = -Infinity;
  for (const v of dbm) {
    if (v > FLOOR) lo = Math.min(lo, v);
    hi = Math.max(hi, v);
  }
  if (!(hi > lo)) lo = hi - 1;

  const cv = $("map"), g = cv.getContext("2d");
  g.clearRect(0, 0, cv.width, cv.height);
  const cw = cv.width / nx, ch = cv.height / ny;
  for (let j = 0; j < ny; j++) {
    for (let i = 0; i < nx; i++) {
      g.fillStyle = color((dbm[j * nx + i] - lo) / (hi - lo));
      // Row 0 is the bottom edge of the area.
      g.fillRect(i * cw, cv.height - (j + 1) * ch, Math.ceil(cw), Math.ceil(ch));
    }
  }
  const rows = poses.map(([x, w], i) => `${i}  x = ${x.toFixed(2)} m  tilt = ${(w * 180 / Math.PI).toFixed(2)} deg`);
  $("poses").textContent =
    `${count} plates, power ${lo.toFixed(1)} .. ${hi.toFixed(1)} dBm\n` + rows.join("\n");
}

function drawSweep() {
  const cv = $("plot"), g = cv.getContext("2d");
  g.clearRect(0, 0, cv.width, cv.height);
  const args = [num("tx-x"), num("tx-y"), num("rx-x"), num("rx-y"), num("l1"), 0.05];
  const series = [
    [powerSweep(false, ...args), "#1f5fbf", "fixed"],
    [powerSweep(true, ...args), "#d0711b", "rotated"],
  ];
  let x0 = Infinity, x1 = -Infinity, y0 = Infinity, y1 = -Infinity;
  for (const [d] of series) {
    for (let k = 0; k < d.length; k += 2) {
      x0 = Math.min(x0, d[k]); x1 = Math.max(x1, d[k]);
      if (d[k + 1] > FLOOR) y0 = Math.min(y0, d[k + 1]);
      y1 = Math.max(y1, d[k + 1]);
    }
  }
  const px = (x) => 40 + (cv.width - 50) * (x - x0) / (x1 - x0);
  const py = (y) => cv.height - 20 - (cv.height - 30) * (Math.max(y, y0) - y0) / (y1 - y0);
  series.forEach(([d, stroke, name], s) => {
    g.strokeStyle = stroke;
    g.beginPath();
    for (let k = 0; k < d.length; k += 2) (k ? g.lineTo : g.moveTo).call(g, px(d[k]), py(d[k + 1]));
    g.stroke();
    g.fillStyle = stroke;
    g.fillText(name, cv.width - 80, 15 + 14 * s);
  });
  g.fillStyle = "#000";
  g.fillText(`${y1.toFixed(0)} dBm`, 2, 12);
  g.fillText(`${y0.toFixed(0)}`, 2, cv.height - 20);
  g.fillText(`x = ${x0.toFixed(0)} m`, 40, cv.height - 5);
  g.fillText(`${x1.toFixed(0)} m`, cv.width - 40, cv.height - 5);
}

function showBest() {
  const [x, p, xr, w, pr] = singleTarget(num("tx-x"), num("tx-y"), num("rx-x"), num("rx-y"), num("l1"), 0.05);
  $("best-out").textContent =
    `fixed plate:     x = ${x.toFixed(2)} m, ${p.toFixed(2)} dBm\n` +
    `rotatable plate: x = ${xr.toFixed(2)} m, tilt ${(w * 180 / Math.PI).toFixed(2)} deg, ${pr.toFixed(2)} dBm`;
}

function guarded(f) {
  return () => {
    try {
      f();
      report(null);
    } catch (e) {
      report(e);
    }
  };
}

await init();
$("plan").addEventListener("click", guarded(drawMap));
$("sweep").addEventListener("click", guarded(drawSweep));
$("best").addEventListener("click", guarded(showBest));
guarded(drawMap)();
