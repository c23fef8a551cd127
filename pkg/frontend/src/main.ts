/**
 * Page wiring for the three views: Lab (experiment with operators),
 * Engine (upload and run campaigns), Profile (detector scorecard).
 * All state lives in the small modules this file composes; the DOM
 * code below only renders it.
 */

import {
  CampaignHandle,
  MascApi,
  OperatorInfo,
  Report,
} from "./api.js";
import { CampaignPoller } from "./campaign.js";
import {
  DEFAULT_CONFIG,
  getValue,
  upsertKey,
  validateConfig,
} from "./config.js";
import { LabSession, previewFiles } from "./lab.js";
import { killGrid, operatorRows, statusBadge, survivors, totals } from "./report.js";

const api = new MascApi("..");

// APIs bundled with the backend catalog; free-text entry stays possible.
const KNOWN_APIS: Array<{ name: string; pattern: "restrictive" | "flexible" }> = [
  { name: "javax.crypto.Cipher", pattern: "restrictive" },
  { name: "java.security.MessageDigest", pattern: "restrictive" },
  { name: "javax.net.ssl.X509TrustManager", pattern: "flexible" },
  { name: "javax.net.ssl.X509ExtendedTrustManager", pattern: "flexible" },
];

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function clear(node: HTMLElement): void {
  while (node.firstChild) node.removeChild(node.firstChild);
}

function text(tag: string, content: string, className = ""): HTMLElement {
  const node = document.createElement(tag);
  node.textContent = content;
  if (className) node.className = className;
  return node;
}

// ---- tabs -------------------------------------------------------------

function showTab(name: "lab" | "engine" | "profile"): void {
  for (const tab of ["lab", "engine", "profile"] as const) {
    el(`view-${tab}`).hidden = tab !== name;
    el(`tab-${tab}`).classList.toggle("active", tab === name);
  }
}

// ---- lab ---------------------------------------------------------------

const lab = new LabSession(api);
let operators: OperatorInfo[] = [];

function labPattern(): "restrictive" | "flexible" {
  const known = KNOWN_APIS.find((a) => a.name === lab.inputs.api);
  return known ? known.pattern : "restrictive";
}

function renderOperatorSelect(): void {
  const select = el<HTMLSelectElement>("lab-operator");
  const pattern = labPattern();
  clear(select);
  for (const op of operators.filter((o) => o.pattern === pattern)) {
    const option = document.createElement("option");
    option.value = op.id;
    option.textContent = `${op.id} — ${op.name}`;
    select.appendChild(option);
  }
  if (!operators.some((o) => o.id === lab.inputs.operator && o.pattern === pattern)) {
    const first = operators.find((o) => o.pattern === pattern);
    if (first) lab.setInputs({ operator: first.id });
  }
  select.value = lab.inputs.operator;
}

function renderPreview(): void {
  const host = el("lab-preview");
  clear(host);
  if (lab.error) {
    host.appendChild(text("div", lab.error, "error-box"));
  }
  if (!lab.preview) return;
  for (const file of previewFiles(lab.preview)) {
    const card = text("div", "", "file-card");
    card.appendChild(text("div", file.name, "file-name"));
    const pre = document.createElement("pre");
    for (const line of file.lines) {
      const span = document.createElement("span");
      span.textContent = `${String(line.number).padStart(3, " ")}  ${line.text}\n`;
      if (line.injected) span.className = "injected";
      pre.appendChild(span);
    }
    card.appendChild(pre);
    host.appendChild(card);
  }
}

function renderHistory(): void {
  const host = el("lab-history");
  clear(host);
  for (const entry of [...lab.history].reverse().slice(1)) {
    const card = text("div", "", "history-card");
    card.appendChild(
      text("div", `${entry.inputs.operator} · ${entry.inputs.api.split(".").pop()}`, "file-name"),
    );
    const pre = document.createElement("pre");
    const injected = previewFiles(entry.response)
      .flatMap((f) => f.lines.filter((l) => l.injected))
      .map((l) => l.text.trim())
      .join("\n");
    pre.textContent = injected || "(no injected lines)";
    card.appendChild(pre);
    host.appendChild(card);
  }
}

async function labRefresh(): Promise<void> {
  await lab.refresh();
  renderPreview();
  renderHistory();
}

function setupLab(): void {
  const apiSelect = el<HTMLSelectElement>("lab-api");
  for (const known of KNOWN_APIS) {
    const option = document.createElement("option");
    option.value = known.name;
    option.textContent = known.name;
    apiSelect.appendChild(option);
  }
  apiSelect.addEventListener("change", () => {
    lab.setInputs({ api: apiSelect.value });
    renderOperatorSelect();
    void labRefresh();
  });
  el<HTMLSelectElement>("lab-operator").addEventListener("change", (event) => {
    lab.setInputs({ operator: (event.target as HTMLSelectElement).value });
    void labRefresh();
  });
  el<HTMLInputElement>("lab-insecure").addEventListener("change", (event) => {
    lab.setInputs({ insecureParam: (event.target as HTMLInputElement).value });
    void labRefresh();
  });
}

// ---- engine -------------------------------------------------------------

let configText = DEFAULT_CONFIG;
let poller: CampaignPoller | null = null;
let currentCampaign: CampaignHandle | null = null;

const FORM_KEYS = [
  "apiName",
  "insecureParam",
  "secureParam",
  "operators",
  "scope",
  "detectorProfile",
  "stopCondition",
  "matchMode",
] as const;

function syncFormFromText(): void {
  for (const key of FORM_KEYS) {
    const input = el<HTMLInputElement>(`form-${key}`);
    input.value = getValue(configText, key) ?? "";
  }
  el<HTMLTextAreaElement>("raw-editor").value = configText;
}

function renderValidation(): void {
  const hasZip = Boolean(el<HTMLInputElement>("engine-app-zip").files?.length);
  const errors = validateConfig(configText, hasZip);
  const host = el("engine-validation");
  clear(host);
  for (const error of errors) {
    host.appendChild(text("div", `${error.field}: ${error.message}`, "error-box"));
  }
  el<HTMLButtonElement>("engine-run").disabled = errors.length > 0;
}

function renderCampaign(handle: CampaignHandle | null): void {
  const host = el("engine-status");
  clear(host);
  if (!handle) return;
  const badge = text("span", handle.state, `state-badge state-${handle.state}`);
  host.appendChild(badge);
  const progress = handle.progress;
  host.appendChild(
    text(
      "span",
      ` ${progress.runs_done}/${progress.mutants_total} runs · ${progress.survivors_so_far} survivors so far`,
    ),
  );
  if (handle.error) host.appendChild(text("div", handle.error, "error-box"));
  el<HTMLButtonElement>("engine-cancel").disabled =
    handle.state === "done" || handle.state === "failed" || handle.state === "stopped";
}

async function runCampaign(): Promise<void> {
  const appFile = el<HTMLInputElement>("engine-app-zip").files?.[0] ?? null;
  const pluginsFile = el<HTMLInputElement>("engine-plugins-zip").files?.[0] ?? null;
  try {
    const handle = await api.createCampaign(configText, appFile, pluginsFile);
    currentCampaign = handle;
    renderCampaign(handle);
    poller?.dispose();
    poller = new CampaignPoller(api, handle.id, {
      onUpdate: (h) => {
        currentCampaign = h;
        renderCampaign(h);
      },
      onTerminal: (h) => {
        renderCampaign(h);
        if (h.state === "done" || h.state === "stopped") void loadProfile(h.id);
      },
      onError: (message) => renderCampaign({ ...currentCampaign!, error: message }),
    });
    poller.start();
  } catch (err) {
    const host = el("engine-validation");
    clear(host);
    host.appendChild(
      text("div", err instanceof Error ? err.message : String(err), "error-box"),
    );
  }
}

function setupEngine(): void {
  syncFormFromText();
  renderValidation();

  for (const key of FORM_KEYS) {
    el<HTMLInputElement>(`form-${key}`).addEventListener("change", (event) => {
      configText = upsertKey(configText, key, (event.target as HTMLInputElement).value.trim());
      syncFormFromText();
      renderValidation();
    });
  }
  el<HTMLTextAreaElement>("raw-editor").addEventListener("input", (event) => {
    configText = (event.target as HTMLTextAreaElement).value;
    renderValidation();
  });
  el<HTMLTextAreaElement>("raw-editor").addEventListener("change", () => {
    syncFormFromText(); // raw side is authoritative
  });
  el<HTMLInputElement>("engine-config-file").addEventListener("change", async (event) => {
    const file = (event.target as HTMLInputElement).files?.[0];
    if (file) {
      configText = await file.text();
      syncFormFromText();
      renderValidation();
    }
  });
  el<HTMLInputElement>("engine-app-zip").addEventListener("change", renderValidation);
  el<HTMLButtonElement>("engine-run").addEventListener("click", () => void runCampaign());
  el<HTMLButtonElement>("engine-cancel").addEventListener("click", async () => {
    if (currentCampaign) {
      try {
        renderCampaign(await api.cancel(currentCampaign.id));
      } catch {
        // already finished: the poller will render the terminal state
      }
    }
  });

  const tabs: Array<["form" | "raw", string]> = [
    ["form", "engine-form"],
    ["raw", "engine-raw"],
  ];
  for (const [name, viewId] of tabs) {
    el(`engine-tab-${name}`).addEventListener("click", () => {
      for (const [other, otherView] of tabs) {
        el(otherView).hidden = other !== name;
        el(`engine-tab-${other}`).classList.toggle("active", other === name);
      }
    });
  }
}

// ---- profile ------------------------------------------------------------

async function loadProfile(campaignId: string): Promise<void> {
  const report = await api.report(campaignId);
  renderProfile(campaignId, report);
  showTab("profile");
}

function renderProfile(campaignId: string, report: Report): void {
  const summary = totals(report);
  el("profile-summary").textContent =
    `${report.campaign.detector || "(no detector)"} · ${summary.mutants} mutants · ` +
    `${summary.killed} killed / ${summary.survived} survived · stop: ${report.campaign.stop_reason}`;

  const csv = el<HTMLAnchorElement>("profile-csv");
  csv.href = api.csvUrl(campaignId);
  csv.hidden = false;

  const aggregates = el("profile-aggregates");
  clear(aggregates);
  const table = document.createElement("table");
  const head = document.createElement("tr");
  for (const heading of ["operator", "total", "killed", "survived", "error", "skipped"]) {
    head.appendChild(text("th", heading));
  }
  table.appendChild(head);
  for (const row of operatorRows(report)) {
    const tr = document.createElement("tr");
    tr.appendChild(text("td", row.id));
    tr.appendChild(text("td", String(row.total)));
    tr.appendChild(text("td", String(row.killed)));
    tr.appendChild(text("td", String(row.survived)));
    tr.appendChild(text("td", String(row.error)));
    tr.appendChild(text("td", String(row.skipped)));
    table.appendChild(tr);
  }
  aggregates.appendChild(table);

  const grid = el("profile-grid");
  clear(grid);
  for (const row of killGrid(report)) {
    const rowDiv = text("div", "", "grid-row");
    rowDiv.appendChild(text("span", row.operator, "grid-op"));
    for (const mutant of row.mutants) {
      const cell = text("span", mutant.status[0]!.toUpperCase(), `grid-cell ${statusBadge(mutant.status)}`);
      cell.title = `${mutant.id} · ${mutant.file}:${mutant.start} · ${mutant.status}`;
      rowDiv.appendChild(cell);
    }
    grid.appendChild(rowDiv);
  }

  const survivorHost = el("profile-survivors");
  clear(survivorHost);
  for (const mutant of survivors(report)) {
    const details = document.createElement("details");
    const summaryEl = document.createElement("summary");
    summaryEl.textContent = `${mutant.id} · ${mutant.file}:${mutant.start}`;
    details.appendChild(summaryEl);
    const pre = document.createElement("pre");
    pre.textContent = mutant.excerpt || "(excerpt unavailable)";
    details.appendChild(pre);
    survivorHost.appendChild(details);
  }
  if (!survivors(report).length) {
    survivorHost.appendChild(text("p", "No survivors: every mutant was killed."));
  }
}

// ---- boot -----------------------------------------------------------------

async function boot(): Promise<void> {
  for (const tab of ["lab", "engine", "profile"] as const) {
    el(`tab-${tab}`).addEventListener("click", () => showTab(tab));
  }
  setupLab();
  setupEngine();
  showTab("lab");
  try {
    operators = await api.operators();
    renderOperatorSelect();
    await labRefresh();
  } catch (err) {
    el("lab-preview").appendChild(
      text("div", `backend unreachable: ${err instanceof Error ? err.message : err}`, "error-box"),
    );
  }
}

document.addEventListener("DOMContentLoaded", () => void boot());
