/**
 * Typed client for the campaign runner's HTTP API.
 *
 * This module is the frontend's only network surface; everything else
 * works on the JSON documents it returns, untransformed.
 */

export interface OperatorInfo {
  id: string;
  name: string;
  pattern: "restrictive" | "flexible";
  threatTags: string[];
  params: Record<string, unknown>;
  origin: "builtin" | "plugin";
  description: string;
}

export interface MutantFile {
  name: string;
  text: string;
}

export interface MutantSpan {
  name: string;
  startLine: number;
  endLine: number;
}

export interface MutateResponse {
  operator: string;
  api: string;
  files: MutantFile[];
  spans: MutantSpan[];
}

export interface MutateRequest {
  api: string;
  operator: string;
  params?: Record<string, string>;
  insecureParam?: string;
  secureParam?: string;
}

export interface CampaignProgress {
  mutants_total: number;
  runs_done: number;
  survivors_so_far: number;
}

export type CampaignState =
  | "queued"
  | "seeding"
  | "running"
  | "done"
  | "failed"
  | "stopped";

export interface CampaignHandle {
  id: string;
  state: CampaignState;
  progress: CampaignProgress;
  report_path: string;
  error: string;
}

export interface ReportFinding {
  ruleId: string;
  message: string;
  file: string;
  startLine: number;
  endLine: number;
  level: string;
}

export interface ReportMutant {
  id: string;
  operator: string;
  scope: string;
  file: string;
  start: number;
  end: number;
  status: "killed" | "survived" | "error" | "skipped" | "pending";
  excerpt?: string;
  findings: ReportFinding[];
}

export interface OperatorAggregate {
  id: string;
  total: number;
  killed: number;
  survived: number;
  error: number;
  skipped: number;
}

export interface Report {
  campaign: {
    config_hash: string;
    detector: string;
    started: string;
    finished: string;
    stop_reason: string;
    reason?: string;
  };
  mutants: ReportMutant[];
  operators: OperatorAggregate[];
}

export interface ApiError {
  code: string;
  message: string;
}

export class BackendError extends Error {
  readonly code: string;
  readonly status: number;

  constructor(status: number, body: ApiError) {
    super(body.message || `request failed with status ${status}`);
    this.code = body.code || "error";
    this.status = status;
  }
}

/** Fetch-compatible function, injectable for tests. */
export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

async function asError(response: Response): Promise<BackendError> {
  let body: ApiError = { code: "error", message: `HTTP ${response.status}` };
  try {
    const parsed = await response.json();
    if (parsed && typeof parsed === "object" && "message" in parsed) {
      body = parsed as ApiError;
    }
  } catch {
    // non-JSON error body: keep the generic message
  }
  return new BackendError(response.status, body);
}

export class MascApi {
  private readonly base: string;
  private readonly fetchFn: FetchLike;

  constructor(base = "", fetchFn: FetchLike = (...args) => fetch(...args)) {
    this.base = base.replace(/\/$/, "");
    this.fetchFn = fetchFn;
  }

  private async getJson<T>(path: string): Promise<T> {
    const response = await this.fetchFn(`${this.base}${path}`);
    if (!response.ok) throw await asError(response);
    return (await response.json()) as T;
  }

  operators(): Promise<OperatorInfo[]> {
    return this.getJson<OperatorInfo[]>("/operators");
  }

  async mutate(request: MutateRequest): Promise<MutateResponse> {
    const response = await this.fetchFn(`${this.base}/mutate`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(request),
    });
    if (!response.ok) throw await asError(response);
    return (await response.json()) as MutateResponse;
  }

  async createCampaign(
    configText: string,
    appZip?: Blob | null,
    pluginsZip?: Blob | null,
  ): Promise<CampaignHandle> {
    const form = new FormData();
    form.append("config", new Blob([configText]), "campaign.properties");
    if (appZip) form.append("app", appZip, "app.zip");
    if (pluginsZip) form.append("plugins", pluginsZip, "plugins.zip");
    const response = await this.fetchFn(`${this.base}/campaigns`, {
      method: "POST",
      body: form,
    });
    if (!response.ok) throw await asError(response);
    return (await response.json()) as CampaignHandle;
  }

  campaign(id: string): Promise<CampaignHandle> {
    return this.getJson<CampaignHandle>(`/campaigns/${encodeURIComponent(id)}`);
  }

  report(id: string): Promise<Report> {
    return this.getJson<Report>(
      `/campaigns/${encodeURIComponent(id)}/report?format=json`,
    );
  }

  csvUrl(id: string): string {
    return `${this.base}/campaigns/${encodeURIComponent(id)}/report?format=csv`;
  }

  async cancel(id: string): Promise<CampaignHandle> {
    const response = await this.fetchFn(
      `${this.base}/campaigns/${encodeURIComponent(id)}`,
      { method: "DELETE" },
    );
    if (!response.ok) throw await asError(response);
    return (await response.json()) as CampaignHandle;
  }
}
