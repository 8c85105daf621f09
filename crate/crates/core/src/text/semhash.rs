/// Subword Semantic Hashing: every character trigram of `#word#` for each
/// whitespace-separated word, in order.
pub fn semhash_tokens(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    for word in text.split_whitespace() {
        let padded: Vec<char> = std::iter::once('#')
            .chain(word.chars())
            .chain(std::iter::once('#'))
            .collect();
        out.extend(padded.windows(3).map(|w| w.iter().collect::<String>()));
    }
    out
}
