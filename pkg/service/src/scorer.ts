// Development scorer: deterministic lexical overlap standing in for a
// trained cross-encoder checkpoint. Scores never leave [0, 1].

const STOPWORDS = new Set(
  (
    "a an the and or but if while is are was were be been being am do does " +
    "did have has had having what which who whom whose where when why how " +
    "that this these those i you he she it we they me him her us them my " +
    "your his its our their of in on at to for from by with about as into " +
    "over after before between out against during without under around " +
    "among not no nor so than too very can will just"
  ).split(" ")
);

function contentTokens(text: string): Set<string> {
  const tokens = text.toLowerCase().match(/[a-z0-9']+/g) ?? [];
  return new Set(tokens.filter((t) => !STOPWORDS.has(t)));
}

export function clampScore(value: number): number {
  if (Number.isNaN(value)) return 0;
  return Math.min(1, Math.max(0, value));
}

export function lexicalScore(question: string, context: string): number {
  const q = contentTokens(question);
  if (q.size === 0) return 0;
  const c = contentTokens(context);
  let overlap = 0;
  for (const token of q) {
    if (c.has(token)) overlap += 1;
  }
  return clampScore(overlap / q.size);
}
