/**
 * Lab tests. The parity block is the acceptance check: for ten
 * (api, operator) pairs the preview text held by the Lab must be
 * byte-identical to the recorded CLI `mutate` output (same JSON
 * contract, same bytes; regenerate with scripts/record-fixtures.sh).
 */

import { readFileSync, readdirSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";

import { MascApi, MutateResponse } from "../src/api.js";
import { HISTORY_LIMIT, LabSession, previewFiles } from "../src/lab.js";

const FIXTURE_DIR = join(dirname(fileURLToPath(import.meta.url)), "fixtures", "mutate");

function loadFixture(name: string): MutateResponse {
  return JSON.parse(readFileSync(join(FIXTURE_DIR, name), "utf-8"));
}

function apiReturning(
  handler: (body: any) => Promise<MutateResponse> | MutateResponse,
): MascApi {
  const fetchFn = async (_url: string, init?: RequestInit) => {
    const body = JSON.parse(String(init?.body ?? "{}"));
    const doc = await handler(body);
    return new Response(JSON.stringify(doc), { status: 200 });
  };
  return new MascApi("", fetchFn);
}

describe("lab preview parity with CLI output", () => {
  const fixtures = readdirSync(FIXTURE_DIR).filter((f: string) => f.endsWith(".json"));

  it("covers ten (api, operator) pairs", () => {
    expect(fixtures.length).toBe(10);
  });

  for (const name of fixtures) {
    it(`preserves CLI bytes for ${name}`, async () => {
      const recorded = loadFixture(name);
      const lab = new LabSession(
        apiReturning(() => JSON.parse(JSON.stringify(recorded))),
      );
      lab.setInputs({ api: recorded.api, operator: recorded.operator });
      await lab.refresh();

      expect(lab.preview).not.toBeNull();
      // the state's preview is the response, byte-for-byte
      for (const [i, file] of lab.preview!.files.entries()) {
        expect(file.text).toBe(recorded.files[i]!.text);
      }
      // and the line-split display model reassembles to the same bytes
      for (const file of previewFiles(lab.preview!)) {
        expect(file.lines.map((l) => l.text).join("\n")).toBe(file.text);
      }
    });
  }

  it("marks exactly the injected span lines", async () => {
    const recorded = loadFixture("Cipher-R1.json");
    const files = previewFiles(recorded);
    const main = files.find((f) => f.name === "Main.java")!;
    const span = recorded.spans.find((s) => s.name === "Main.java")!;
    for (const line of main.lines) {
      expect(line.injected).toBe(
        line.number >= span.startLine && line.number <= span.endLine,
      );
    }
    const injectedText = main.lines.filter((l) => l.injected).map((l) => l.text.trim());
    expect(injectedText).toContain('Cipher.getInstance("des");');
  });
});

describe("lab session behavior", () => {
  it("latest request wins when responses arrive out of order", async () => {
    const resolvers: Array<(doc: MutateResponse) => void> = [];
    const lab = new LabSession(
      apiReturning(() => new Promise<MutateResponse>((resolve) => resolvers.push(resolve))),
    );

    lab.setInputs({ operator: "R1" });
    const first = lab.refresh();
    lab.setInputs({ operator: "R2" });
    const second = lab.refresh();

    const r1 = loadFixture("Cipher-R1.json");
    const r2 = loadFixture("Cipher-R2.json");
    resolvers[1]!(r2); // newer answer lands first
    await second;
    resolvers[0]!(r1); // stale answer must be discarded
    await first;

    expect(lab.preview!.operator).toBe("R2");
    // only the accepted response entered history
    expect(lab.history.map((h) => h.response.operator)).toEqual(["R2"]);
  });

  it("keeps previous previews in history for comparison", async () => {
    let current = loadFixture("Cipher-R1.json");
    const lab = new LabSession(apiReturning(() => current));
    lab.setInputs({ operator: "R1" });
    await lab.refresh();
    current = loadFixture("Cipher-R4.json");
    lab.setInputs({ operator: "R4" });
    await lab.refresh();

    expect(lab.history.map((h) => h.response.operator)).toEqual(["R1", "R4"]);
    expect(lab.history.map((h) => h.inputs.operator)).toEqual(["R1", "R4"]);
  });

  it("bounds the history", async () => {
    const doc = loadFixture("Cipher-R1.json");
    const lab = new LabSession(apiReturning(() => JSON.parse(JSON.stringify(doc))));
    for (let i = 0; i < HISTORY_LIMIT + 3; i++) {
      await lab.refresh();
    }
    expect(lab.history.length).toBe(HISTORY_LIMIT);
  });

  it("keeps inputs and previous preview when the backend fails", async () => {
    let fail = false;
    const good = loadFixture("Cipher-R1.json");
    const fetchFn = async () => {
      if (fail) {
        return new Response(
          JSON.stringify({ code: "invalid-input", message: "unknown operator" }),
          { status: 400 },
        );
      }
      return new Response(JSON.stringify(good), { status: 200 });
    };
    const lab = new LabSession(new MascApi("", fetchFn));
    await lab.refresh();
    expect(lab.error).toBeNull();

    fail = true;
    lab.setInputs({ operator: "R9" });
    await lab.refresh();

    expect(lab.error).toContain("unknown operator");
    expect(lab.inputs.operator).toBe("R9"); // inputs preserved
    expect(lab.preview!.operator).toBe("R1"); // last good preview preserved
  });
});
