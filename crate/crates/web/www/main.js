import init, { languages, convert, overlap_matrix } from "./pkg/turkic_web.js";

const $ = (id) => document.getElementById(id);

function cell(tag, text, cls) {
  const el = document.createElement(tag);
  el.textContent = text;
  if (cls) el.className = cls;
  return el;
}

function renderAudit(result) {
  const audit = $("audit");
  audit.replaceChildren();
  const rows = [
    ...result.fallbacks.map((f) => [f.line, f.position, "fallback", `${f.ipa} → ${f.kazakh}`]),
    ...result.dropped.map((d) => [d.line, d.position, "dropped", `${JSON.stringify(d.text)} (${d.reason})`]),
  ];
  if (rows.length === 0) return;
  const table = document.createElement("table");
  const head = document.createElement("tr");
  for (const h of ["line", "position", "kind", "detail"]) head.append(cell("th", h));
  table.append(head);
  for (const r of rows) {
    const tr = document.createElement("tr");
    for (const v of r) tr.append(cell("td", String(v)));
    table.append(tr);
  }
  audit.append(cell("h3", "Audit"), table);
}

function update() {
  $("error").textContent = "";
  try {
    const result = JSON.parse(convert($("lang").value, $("input").value, $("policy").value));
    $("output").textContent = result.output;
    $("ipa").textContent = result.ipa;
    renderAudit(result);
  } catch (e) {
    $("output").textContent = "";
    $("ipa").textContent = "";
    $("audit").replaceChildren();
    $("error").textContent = e.message ?? String(e);
  }
}

function renderOverlap() {
  const m = JSON.parse(overlap_matrix());
  const table = $("overlap");
  const head = document.createElement("tr");
  head.append(cell("th", ""));
  for (const l of m.languages) head.append(cell("th", l));
  table.append(head);
  m.languages.forEach((l, i) => {
    const tr = document.createElement("tr");
    tr.append(cell("th", l));
    const size = m.counts[i][i];
    m.counts[i].forEach((n, j) => {
      const td = cell("td", String(n), i === j ? "diag" : "");
      // Shade by share of the row language's inventory.
      td.style.setProperty("--share", (n / size).toFixed(2));
      td.title = `${l} / ${m.languages[j]}: ${n} of ${size}`;
      tr.append(td);
    });
    table.append(tr);
  });
}

await init();
const select = $("lang");
for (const l of JSON.parse(languages())) {
  const opt = cell("option", `${l.name} (${l.code})`);
  opt.value = l.code;
  select.append(opt);
}
select.value = "tr";
for (const id of ["lang", "policy", "input"]) $(id).addEventListener("input", update);
update();
renderOverlap();
