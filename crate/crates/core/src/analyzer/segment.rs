/// Longest prefix cluster the bundled lexicon uses.
pub const MAX_PREFIX_CHARS: usize = 4;
/// Longest suffix cluster the bundled lexicon uses.
pub const MAX_SUFFIX_CHARS: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Split<'a> {
    pub prefix: &'a str,
    pub stem: &'a str,
    pub suffix: &'a str,
}

impl<'a> Split<'a> {
    pub fn as_tuple(&self) -> (&'a str, &'a str, &'a str) {
        (self.prefix, self.stem, self.suffix)
    }
}

pub fn segmentations(surface: &str) -> Vec<Split<'_>> {
    segmentations_capped(surface, MAX_PREFIX_CHARS, MAX_SUFFIX_CHARS)
}

/// Every prefix/stem/suffix split with a non-empty stem, prefix at most
/// `max_prefix` characters and suffix at most `max_suffix`. Ordered by
/// prefix length, then suffix length.
pub fn segmentations_capped(surface: &str, max_prefix: usize, max_suffix: usize) -> Vec<Split<'_>> {
    let bounds: Vec<usize> = surface
        .char_indices()
        .map(|(i, _)| i)
        .chain(std::iter::once(surface.len()))
        .collect();
    let len = bounds.len() - 1;
    let mut out = Vec::new();
    for pre in 0..=max_prefix.min(len) {
        for suf in 0..=max_suffix.min(len - pre) {
            if pre + suf >= len {
                break;
            }
            let (a, b) = (bounds[pre], bounds[len - suf]);
            out.push(Split {
                prefix: &surface[..a],
                stem: &surface[a..b],
                suffix: &surface[b..],
            });
        }
    }
    out
}
