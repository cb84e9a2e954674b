import { describe, expect, it } from "vitest";
import { renderText, toCyrillic, toLatin } from "../src/translit";

describe("toCyrillic", () => {
  it("maps a simple phrase", () => {
    expect(toCyrillic("Radi kao konj")).toBe("Ради као коњ");
  });

  it("maps digraphs to single letters", () => {
    expect(toCyrillic("džak")).toBe("џак");
    expect(toCyrillic("ljut")).toBe("љут");
    expect(toCyrillic("njegov")).toBe("његов");
  });

  it("maps capitalized digraphs", () => {
    expect(toCyrillic("Džak")).toBe("Џак");
    expect(toCyrillic("Ljut kao ris")).toBe("Љут као рис");
    expect(toCyrillic("NJEGOV")).toBe("ЊЕГОВ");
  });

  it("covers every special letter", () => {
    expect(toCyrillic("čđšžć")).toBe("чђшжћ");
    expect(toCyrillic("ČĐŠŽĆ")).toBe("ЧЂШЖЋ");
  });

  it("keeps punctuation and foreign letters", () => {
    expect(toCyrillic("k'o")).toBe("к'о");
    expect(toCyrillic("beo, kao; sneg!")).toBe("бео, као; снег!");
    expect(toCyrillic("xy w q")).toBe("xy w q");
  });
});

describe("toLatin", () => {
  it("maps a simple phrase", () => {
    expect(toLatin("Ради као коњ")).toBe("Radi kao konj");
  });

  it("passes Latin text through unchanged", () => {
    expect(toLatin("Radi kao konj")).toBe("Radi kao konj");
  });

  it("expands digraph letters with word-aware case", () => {
    expect(toLatin("љубав")).toBe("ljubav");
    expect(toLatin("Љубав")).toBe("Ljubav");
    expect(toLatin("ЉУБАВ")).toBe("LJUBAV");
    expect(toLatin("БИЉ")).toBe("BILJ");
    expect(toLatin("Џак")).toBe("Džak");
    expect(toLatin("ЏАК")).toBe("DŽAK");
  });

  it("round-trips Serbian Latin phrases", () => {
    for (const phrase of [
      "beo kao sneg",
      "ljut kao ris",
      "spava k'o top",
      "džak đubriva",
      "Njegoš čita, ćuti i žuri",
    ]) {
      expect(toLatin(toCyrillic(phrase))).toBe(phrase);
    }
  });
});

describe("renderText", () => {
  it("selects the script by mode", () => {
    expect(renderText("Ради као коњ", "latin")).toBe("Radi kao konj");
    expect(renderText("Radi kao konj", "cyrillic")).toBe("Ради као коњ");
  });

  it("normalizes mixed-script input to one script", () => {
    expect(renderText("Ради kao коњ", "latin")).toBe("Radi kao konj");
    expect(renderText("Ради kao коњ", "cyrillic")).toBe("Ради као коњ");
  });
});
