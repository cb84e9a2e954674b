/**
 * Serbian is written in two scripts. Entries are stored as contributed and
 * presented in whichever script the reader picks, so both directions of the
 * standard Latin/Cyrillic letter correspondence live here. Digraphs (dž, lj,
 * nj) map to single Cyrillic letters and back.
 */

export type ScriptMode = "latin" | "cyrillic";

const LATIN_DIGRAPHS: Record<string, string> = {
  "dž": "џ",
  "Dž": "Џ",
  "DŽ": "Џ",
  "lj": "љ",
  "Lj": "Љ",
  "LJ": "Љ",
  "nj": "њ",
  "Nj": "Њ",
  "NJ": "Њ",
};

const LATIN_SINGLES: Record<string, string> = {
  a: "а", b: "б", c: "ц", "č": "ч", "ć": "ћ", d: "д", "đ": "ђ",
  e: "е", f: "ф", g: "г", h: "х", i: "и", j: "ј", k: "к", l: "л",
  m: "м", n: "н", o: "о", p: "п", r: "р", s: "с", "š": "ш", t: "т",
  u: "у", v: "в", z: "з", "ž": "ж",
  A: "А", B: "Б", C: "Ц", "Č": "Ч", "Ć": "Ћ", D: "Д", "Đ": "Ђ",
  E: "Е", F: "Ф", G: "Г", H: "Х", I: "И", J: "Ј", K: "К", L: "Л",
  M: "М", N: "Н", O: "О", P: "П", R: "Р", S: "С", "Š": "Ш", T: "Т",
  U: "У", V: "В", Z: "З", "Ž": "Ж",
};

const CYRILLIC_SINGLES: Record<string, string> = {
  "а": "a", "б": "b", "в": "v", "г": "g", "д": "d", "ђ": "đ", "е": "e",
  "ж": "ž", "з": "z", "и": "i", "ј": "j", "к": "k", "л": "l", "љ": "lj",
  "м": "m", "н": "n", "њ": "nj", "о": "o", "п": "p", "р": "r", "с": "s",
  "т": "t", "ћ": "ć", "у": "u", "ф": "f", "х": "h", "ц": "c", "ч": "č",
  "џ": "dž", "ш": "š",
  "А": "A", "Б": "B", "В": "V", "Г": "G", "Д": "D", "Ђ": "Đ", "Е": "E",
  "Ж": "Ž", "З": "Z", "И": "I", "Ј": "J", "К": "K", "Л": "L", "М": "M",
  "Н": "N", "О": "O", "П": "P", "Р": "R", "С": "S", "Т": "T", "Ћ": "Ć",
  "У": "U", "Ф": "F", "Х": "H", "Ц": "C", "Ч": "Č", "Ш": "Š",
};

// uppercase digraph letters: plain form, and the all-caps form used when the
// surrounding word is uppercase ("Ljut" vs "LJUT")
const CYRILLIC_UPPER_DIGRAPHS: Record<string, [string, string]> = {
  "Љ": ["Lj", "LJ"],
  "Њ": ["Nj", "NJ"],
  "Џ": ["Dž", "DŽ"],
};

function isLetter(ch: string | undefined): boolean {
  return ch !== undefined && ch.toLowerCase() !== ch.toUpperCase();
}

function isUpperLetter(ch: string | undefined): boolean {
  return isLetter(ch) && ch === ch!.toUpperCase();
}

export function toCyrillic(text: string): string {
  let out = "";
  let i = 0;
  while (i < text.length) {
    const pair = text.slice(i, i + 2);
    const digraph = LATIN_DIGRAPHS[pair];
    if (digraph !== undefined) {
      out += digraph;
      i += 2;
      continue;
    }
    const ch = text[i];
    out += LATIN_SINGLES[ch] ?? ch;
    i += 1;
  }
  return out;
}

export function toLatin(text: string): string {
  let out = "";
  for (let i = 0; i < text.length; i += 1) {
    const ch = text[i];
    const upper = CYRILLIC_UPPER_DIGRAPHS[ch];
    if (upper !== undefined) {
      const next = text[i + 1];
      const prev = text[i - 1];
      // a following capital means an all-caps word; at the end of a word the
      // preceding letter decides
      const allCaps = isUpperLetter(next) || (!isLetter(next) && isUpperLetter(prev));
      out += allCaps ? upper[1] : upper[0];
      continue;
    }
    out += CYRILLIC_SINGLES[ch] ?? ch;
  }
  return out;
}

export function renderText(text: string, mode: ScriptMode): string {
  return mode === "cyrillic" ? toCyrillic(text) : toLatin(text);
}
