/**
 * Right-to-left text helpers. Arabic payloads are wrapped in Unicode
 * first-strong isolates when embedded in structured (LTR) contexts, so
 * operators and punctuation around them cannot reorder.
 */

const RTL_RANGES: ReadonlyArray<readonly [number, number]> = [
  [0x0590, 0x05ff], // Hebrew
  [0x0600, 0x06ff], // Arabic
  [0x0750, 0x077f], // Arabic Supplement
  [0x08a0, 0x08ff], // Arabic Extended-A
  [0xfb50, 0xfdff], // Arabic presentation forms
  [0xfe70, 0xfeff], // Arabic presentation forms B
];

const FSI = '⁨'; // FIRST STRONG ISOLATE
const PDI = '⁩'; // POP DIRECTIONAL ISOLATE

export function isRtlChar(char: string): boolean {
  const code = char.codePointAt(0) ?? 0;
  return RTL_RANGES.some(([start, end]) => code >= start && code <= end);
}

/** True when the first strong-direction character is RTL. */
export function startsRtl(text: string): boolean {
  for (const char of text) {
    if (isRtlChar(char)) return true;
    if (/[A-Za-z]/.test(char)) return false;
  }
  return false;
}

/** dir attribute for an element whose content is a single phrase. */
export function dirFor(text: string): 'rtl' | 'ltr' | 'auto' {
  if (!text.trim()) return 'auto';
  return startsRtl(text) ? 'rtl' : 'ltr';
}

/** Wrap a phrase in first-strong isolates for safe embedding in mixed-
 * direction text. Idempotent. */
export function isolate(text: string): string {
  if (!text || (text.startsWith(FSI) && text.endsWith(PDI))) return text;
  return FSI + text + PDI;
}

/** Strip the isolates added by isolate(); used when copying strings out
 * of display contexts. */
export function unisolate(text: string): string {
  return text.replace(new RegExp(`[${FSI}${PDI}]`, 'g'), '');
}
