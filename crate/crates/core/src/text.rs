//! Width and punctuation folding shared by the parser and the validator.

/// Folds full-width ASCII, ideographic punctuation and curly quotes onto
/// their ASCII counterparts. The mapping is strictly one char to one char, so
/// char offsets in the output line up with char offsets in the input.
pub(crate) fn fold_width(s: &str) -> String {
    s.chars().map(fold_char).collect()
}

fn fold_char(c: char) -> char {
    match c {
        '\u{FF01}'..='\u{FF5E}' => char::from_u32(c as u32 - 0xFEE0).unwrap_or(c),
        '\u{3000}' => ' ',
        '\u{3002}' => '.',
        '\u{2018}' | '\u{2019}' => '\'',
        '\u{201C}' | '\u{201D}' => '"',
        _ => c,
    }
}

/// Maps a byte offset in `folded` (the output of [`fold_width`] applied to
/// `original`) back to the matching byte offset in `original`.
pub(crate) fn original_offset(original: &str, folded: &str, folded_byte: usize) -> usize {
    let nchars = folded[..folded_byte].chars().count();
    original
        .char_indices()
        .nth(nchars)
        .map(|(i, _)| i)
        .unwrap_or(original.len())
}
