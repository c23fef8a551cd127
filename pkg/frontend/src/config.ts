/**
 * Campaign config authoring: a form and a raw properties editor as two
 * tabs over one model. The raw text *is* the model; form fields are a
 * lens onto it (reading parses, writing upserts one key in place), so
 * on any conflict the raw side wins by construction.
 *
 * Client-side validation mirrors the backend's key rules just enough
 * to catch the obvious mistakes before any upload.
 */

export interface ParsedEntry {
  key: string;
  value: string;
  line: number;
}

export interface ParseIssue {
  line: number;
  text: string;
  problem: "no-separator" | "empty-key" | "empty-value" | "duplicate-key";
}

export interface ParsedConfig {
  entries: ParsedEntry[];
  issues: ParseIssue[];
}

export const SCOPES = ["main", "similarity", "exhaustive"] as const;
export const MATCH_MODES = ["strict-span", "file-level", "any-new-finding"] as const;
export const SEEDING_MODES = ["per-mutant-copy", "batched"] as const;

export function parseProperties(text: string): ParsedConfig {
  const entries: ParsedEntry[] = [];
  const issues: ParseIssue[] = [];
  const seen = new Set<string>();
  text.split("\n").forEach((rawLine, index) => {
    const line = index + 1;
    const stripped = rawLine.trim();
    if (!stripped || stripped.startsWith("#")) return;
    const eq = stripped.indexOf("=");
    if (eq < 0) {
      issues.push({ line, text: stripped, problem: "no-separator" });
      return;
    }
    const key = stripped.slice(0, eq).trim();
    const value = stripped.slice(eq + 1).trim();
    if (!key) {
      issues.push({ line, text: stripped, problem: "empty-key" });
      return;
    }
    if (!value) {
      issues.push({ line, text: stripped, problem: "empty-value" });
      return;
    }
    if (seen.has(key)) {
      issues.push({ line, text: stripped, problem: "duplicate-key" });
      return;
    }
    seen.add(key);
    entries.push({ key, value, line });
  });
  return { entries, issues };
}

export function getValue(text: string, key: string): string | null {
  const entry = parseProperties(text).entries.find((e) => e.key === key);
  return entry ? entry.value : null;
}

/** Rewrite one key in place, preserving comments, order and unrelated
 * lines; appends when the key is absent. Empty value removes the key. */
export function upsertKey(text: string, key: string, value: string): string {
  const lines = text.split("\n");
  const pattern = new RegExp(`^\\s*${key.replace(/[.*+?^${}()|[\]\\]/g, "\\$&")}\\s*=`);
  let found = false;
  const out: string[] = [];
  for (const line of lines) {
    if (!found && pattern.test(line)) {
      found = true;
      if (value !== "") out.push(`${key} = ${value}`);
      continue;
    }
    out.push(line);
  }
  if (!found && value !== "") {
    while (out.length && out[out.length - 1]!.trim() === "") out.pop();
    out.push(`${key} = ${value}`);
    out.push("");
  }
  return out.join("\n");
}

export interface ValidationError {
  field: string;
  message: string;
}

/** Pre-flight checks run before any request leaves the browser. */
export function validateConfig(text: string, hasAppZip: boolean): ValidationError[] {
  const errors: ValidationError[] = [];
  const { entries, issues } = parseProperties(text);
  for (const issue of issues) {
    errors.push({
      field: "raw",
      message: `line ${issue.line}: ${issue.problem} (${issue.text})`,
    });
  }
  const get = (key: string) => entries.find((e) => e.key === key)?.value ?? null;

  if (!get("apiName")) {
    errors.push({ field: "apiName", message: "apiName is required" });
  }
  const scope = get("scope") ?? "main";
  if (!(SCOPES as readonly string[]).includes(scope)) {
    errors.push({ field: "scope", message: `unknown scope '${scope}'` });
  }
  if (scope !== "main" && !hasAppZip && !get("appSrc")) {
    errors.push({
      field: "appSrc",
      message: `${scope} scope needs an app upload (or an appSrc path)`,
    });
  }
  const matchMode = get("matchMode");
  if (matchMode && !(MATCH_MODES as readonly string[]).includes(matchMode)) {
    errors.push({ field: "matchMode", message: `unknown matchMode '${matchMode}'` });
  }
  const seedingMode = get("seedingMode");
  if (seedingMode && !(SEEDING_MODES as readonly string[]).includes(seedingMode)) {
    errors.push({
      field: "seedingMode",
      message: `unknown seedingMode '${seedingMode}'`,
    });
  }
  const stop = get("stopCondition");
  if (stop && stop !== "none" && stop !== "first-survivor") {
    const match = /^survivor-count:(\d+)$/.exec(stop);
    if (!match || Number(match[1]) < 1) {
      errors.push({
        field: "stopCondition",
        message: `bad stopCondition '${stop}'`,
      });
    }
  }
  const slack = get("spanSlack");
  if (slack !== null && (!/^\d+$/.test(slack) || Number(slack) < 0)) {
    errors.push({ field: "spanSlack", message: "spanSlack must be an integer >= 0" });
  }
  return errors;
}

export const DEFAULT_CONFIG = `# campaign configuration
apiName = javax.crypto.Cipher
insecureParam = DES
secureParam = AES/GCM/NoPadding
operators = ALL
scope = main
detectorProfile = builtin:naive-literal
`;
