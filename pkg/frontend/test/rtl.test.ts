import { describe, expect, it } from 'vitest';

import { dirFor, isRtlChar, isolate, startsRtl, unisolate } from '../src/rtl.js';

describe('isRtlChar', () => {
  it('classifies Arabic letters as RTL', () => {
    for (const ch of 'فرسخيلمدرسة') expect(isRtlChar(ch)).toBe(true);
  });

  it('classifies Latin letters and digits as LTR', () => {
    for (const ch of 'abzOR19') expect(isRtlChar(ch)).toBe(false);
  });

  it('covers Arabic presentation forms', () => {
    expect(isRtlChar('ﺍ')).toBe(true);
  });
});

describe('startsRtl / dirFor', () => {
  it('uses the first strong character', () => {
    expect(startsRtl('فرس OR خيل')).toBe(true);
    expect(startsRtl('(فرس OR خيل)')).toBe(true); // parens are neutral
    expect(startsRtl('OR فرس')).toBe(false);
  });

  it('maps to dir attributes', () => {
    expect(dirFor('فرس')).toBe('rtl');
    expect(dirFor('doc-42')).toBe('ltr');
    expect(dirFor('   ')).toBe('auto');
  });
});

describe('isolate', () => {
  it('wraps in first-strong isolates', () => {
    expect(isolate('فرس')).toBe('⁨فرس⁩');
  });

  it('is idempotent', () => {
    expect(isolate(isolate('فرس'))).toBe(isolate('فرس'));
  });

  it('round-trips through unisolate', () => {
    expect(unisolate(isolate('(فرس OR خيل)'))).toBe('(فرس OR خيل)');
  });

  it('leaves the empty string alone', () => {
    expect(isolate('')).toBe('');
  });
});
