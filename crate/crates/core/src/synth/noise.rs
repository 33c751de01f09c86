use rand::Rng;

/// Applies exactly one character edit (substitute, insert or delete) to one
/// alphabetic token of `name`. Returns `None` when the name has no letters.
pub fn perturb_name<R: Rng + ?Sized>(name: &str, rng: &mut R) -> Option<String> {
    let tokens: Vec<&str> = name.split(' ').collect();
    let candidates: Vec<usize> = tokens
        .iter()
        .enumerate()
        .filter(|(_, t)| t.chars().any(|c| c.is_ascii_alphabetic()))
        .map(|(i, _)| i)
        .collect();
    if candidates.is_empty() {
        return None;
    }
    let ti = candidates[rng.gen_range(0..candidates.len())];
    let mut chars: Vec<char> = tokens[ti].chars().collect();
    let letter_positions: Vec<usize> = chars
        .iter()
        .enumerate()
        .filter(|(_, c)| c.is_ascii_alphabetic())
        .map(|(i, _)| i)
        .collect();
    let upper = chars.iter().filter(|c| c.is_ascii_alphabetic()).all(|c| c.is_ascii_uppercase());
    let random_letter = |rng: &mut R, avoid: Option<char>| loop {
        let c = rng.gen_range(b'a'..=b'z') as char;
        let c = if upper { c.to_ascii_uppercase() } else { c };
        if Some(c.to_ascii_lowercase()) != avoid.map(|a| a.to_ascii_lowercase()) {
            break c;
        }
    };
    // deletion keeps at least two letters in the token
    let can_delete = letter_positions.len() >= 3;
    match rng.gen_range(0..if can_delete { 3 } else { 2 }) {
        0 => {
            let pos = letter_positions[rng.gen_range(0..letter_positions.len())];
            let old = chars[pos];
            let mut new = random_letter(rng, Some(old));
            if old.is_ascii_uppercase() {
                new = new.to_ascii_uppercase();
            } else {
                new = new.to_ascii_lowercase();
            }
            chars[pos] = new;
        }
        1 => {
            // insert after the first letter so title-case stays intact
            let pos = rng.gen_range(1..=chars.len());
            chars.insert(pos, random_letter(rng, None).to_ascii_lowercase());
            if upper {
                chars[pos] = chars[pos].to_ascii_uppercase();
            }
        }
        _ => {
            let pos = letter_positions[rng.gen_range(1..letter_positions.len())];
            chars.remove(pos);
        }
    }
    let mutated: String = chars.into_iter().collect();
    let mut out: Vec<String> = tokens.iter().map(|t| t.to_string()).collect();
    out[ti] = mutated;
    Some(out.join(" "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{levenshtein, normalize_name};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn exactly_one_edit_in_one_token() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..2000 {
            for name in ["RAM KUMAR", "Srishti Gupta", "OM JAIN"] {
                let out = perturb_name(name, &mut rng).unwrap();
                assert_ne!(out, name);
                let a = normalize_name(name);
                let b = normalize_name(&out);
                assert_eq!(a.tokens().len(), b.tokens().len(), "{name} -> {out}");
                let dists: Vec<usize> = a
                    .tokens()
                    .iter()
                    .zip(b.tokens())
                    .map(|(x, y)| levenshtein(x, y))
                    .collect();
                assert_eq!(dists.iter().sum::<usize>(), 1, "{name} -> {out}");
            }
        }
    }

    #[test]
    fn raw_string_distance_is_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let out = perturb_name("RAM KUMAR", &mut rng).unwrap();
        assert_eq!(levenshtein("RAM KUMAR", &out), 1);
    }

    #[test]
    fn letterless_names_are_refused() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(perturb_name("", &mut rng), None);
        assert_eq!(perturb_name("12 34", &mut rng), None);
    }
}
