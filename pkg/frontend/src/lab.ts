/**
 * Lab state: pick an API and an operator, see the mutant immediately.
 *
 * The preview is always the byte-exact `files[].text` of the latest
 * accepted POST /mutate response: this module never rewrites mutant
 * code, it only decorates lines for highlighting.  At most one request
 * is in flight; a response that arrives after a newer request was
 * issued is discarded (latest wins).  Every accepted preview is pushed
 * to a bounded history for side-by-side comparison.
 */

import { MascApi, MutateRequest, MutateResponse } from "./api.js";

export interface LabInputs {
  api: string;
  operator: string;
  insecureParam: string;
  secureParam: string;
  params: Record<string, string>;
}

export interface PreviewLine {
  number: number;
  text: string;
  injected: boolean;
}

export interface PreviewFile {
  name: string;
  text: string;
  lines: PreviewLine[];
}

export interface HistoryEntry {
  inputs: LabInputs;
  response: MutateResponse;
}

export const HISTORY_LIMIT = 8;

/** Split response files into display lines, flagging the injected span.
 * Joining `lines[].text` with "\n" reproduces `file.text` exactly. */
export function previewFiles(response: MutateResponse): PreviewFile[] {
  return response.files.map((file) => {
    const spans = response.spans.filter((s) => s.name === file.name);
    const lines = file.text.split("\n").map((text, i) => ({
      number: i + 1,
      text,
      injected: spans.some((s) => i + 1 >= s.startLine && i + 1 <= s.endLine),
    }));
    return { name: file.name, text: file.text, lines };
  });
}

export class LabSession {
  inputs: LabInputs = {
    api: "javax.crypto.Cipher",
    operator: "R1",
    insecureParam: "",
    secureParam: "",
    params: {},
  };
  preview: MutateResponse | null = null;
  history: HistoryEntry[] = [];
  error: string | null = null;
  pending = false;

  private requestSeq = 0;

  constructor(private readonly api: MascApi) {}

  /** Issue a preview request for the current inputs (latest wins). */
  async refresh(): Promise<void> {
    const token = ++this.requestSeq;
    const inputs: LabInputs = JSON.parse(JSON.stringify(this.inputs));
    const request: MutateRequest = {
      api: inputs.api,
      operator: inputs.operator,
      params: inputs.params,
    };
    if (inputs.insecureParam) request.insecureParam = inputs.insecureParam;
    if (inputs.secureParam) request.secureParam = inputs.secureParam;

    this.pending = true;
    try {
      const response = await this.api.mutate(request);
      if (token !== this.requestSeq) return; // a newer request superseded us
      this.preview = response;
      this.error = null;
      this.history.push({ inputs, response });
      if (this.history.length > HISTORY_LIMIT) this.history.shift();
    } catch (err) {
      if (token !== this.requestSeq) return;
      // inputs and the previous preview survive a failed refresh
      this.error = err instanceof Error ? err.message : String(err);
    } finally {
      if (token === this.requestSeq) this.pending = false;
    }
  }

  setInputs(patch: Partial<LabInputs>): void {
    this.inputs = { ...this.inputs, ...patch };
  }
}
