import init, { class_table, rank_counts, fiber_census } from "./pkg/symrank_demo.js";

const $ = (id) => document.getElementById(id);

function call(f, ...args) {
  try {
    return { ok: JSON.parse(f(...args)) };
  } catch (e) {
    return { err: String(e) };
  }
}

function showError(el, msg) {
  el.innerHTML = `<p class="err">${msg}</p>`;
}

function renderTable() {
  const out = $("table-out");
  const res = call(class_table, Number($("table-n").value));
  if (res.err) return showError(out, res.err);
  const rows = res.ok.rows
    .map((r) => `<tr><td>${r.n}</td><td>${r.k}</td><td class="poly">${r.text}</td></tr>`)
    .join("");
  out.innerHTML = `<table><tr><th>n</th><th>k</th><th>class</th></tr>${rows}</table>`;
}

function drawBars(canvas, rows) {
  const ctx = canvas.getContext("2d");
  const { width, height } = canvas;
  ctx.clearRect(0, 0, width, height);
  // log scale: counts span many orders of magnitude
  const logs = rows.map((r) => Math.log10(1 + r.brute_force));
  const top = Math.max(...logs, 1);
  const slot = width / rows.length;
  rows.forEach((r, i) => {
    const h = (logs[i] / top) * (height - 30);
    ctx.fillStyle = r.match ? "#4a7fb5" : "#a31515";
    ctx.fillRect(i * slot + slot * 0.2, height - 20 - h, slot * 0.6, h);
    ctx.fillStyle = "#222";
    ctx.fillText(`k=${r.k}`, i * slot + slot * 0.35, height - 5);
  });
}

function renderCounts() {
  const out = $("count-out");
  const res = call(rank_counts, Number($("count-n").value), Number($("count-p").value));
  if (res.err) return showError(out, res.err);
  const d = res.ok;
  const rows = d.rows
    .map((r) => `<tr><td>${r.k}</td><td>${r.brute_force}</td><td>${r.formula}</td>` +
      `<td class="${r.match ? "ok" : "bad"}">${r.match ? "match" : "MISMATCH"}</td></tr>`)
    .join("");
  out.innerHTML = `<p>${d.total} matrices enumerated.</p>` +
    `<table><tr><th>rank k</th><th>brute force</th><th>class at L = ${d.p}</th><th></th></tr>${rows}</table>`;
  drawBars($("count-chart"), d.rows);
}

function renderFibers() {
  const out = $("fiber-out");
  const res = call(fiber_census, Number($("fiber-n").value), Number($("fiber-p").value));
  if (res.err) return showError(out, res.err);
  const d = res.ok;
  const header = Array.from({ length: d.n + 1 }, (_, s) => `<th>s=${s}</th>`).join("");
  let body = "";
  for (let r = 0; r < d.n; r++) {
    const cells = d.cells
      .filter((c) => c.minor_rank === r)
      .map((c) => {
        const cls = c.match ? (c.count ? "ok" : "") : "bad";
        return `<td class="${cls}" title="expected ${c.expected}">${c.count || ""}</td>`;
      })
      .join("");
    body += `<tr><th>r=${r}</th>${cells}</tr>`;
  }
  out.innerHTML = `<p>${d.total} matrices; rows are minor rank r, columns full rank s.</p>` +
    `<table><tr><th></th>${header}</tr>${body}</table>`;
}

await init();
$("table-n").addEventListener("input", renderTable);
$("count-run").addEventListener("click", renderCounts);
$("fiber-run").addEventListener("click", renderFibers);
renderTable();
renderCounts();
renderFibers();
