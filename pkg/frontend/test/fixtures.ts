/** Loads session views captured verbatim from the HTTP service, so model
 * and rendering tests run against the real wire format.
 */

import { readFileSync } from "node:fs";
import { join } from "node:path";
import type { SessionView } from "../src/types.js";

export function loadView(name: string): SessionView {
  // Resolved from the package root so it works in browser-like test
  // environments too, where module URLs are not filesystem paths.
  const path = join(process.cwd(), "test", "fixtures", `${name}.json`);
  return JSON.parse(readFileSync(path, "utf8")) as SessionView;
}
