//! Index arithmetic for the dihedral images of a cyclic face description.

/// Number of images considered: rotations only, or rotations and reflections.
pub fn image_count(k: usize, reflection: bool) -> usize {
    if reflection {
        2 * k
    } else {
        k
    }
}

/// For image `image` of a `k`-slot description, the original indices that
/// land at vertex slot `i` and face slot `i`.
///
/// Images `0..k` are rotations by `image`; images `k..2k` reverse the vertex
/// order starting from vertex `image - k`. Under reversal the face between
/// new vertices `i` and `i+1` is the old face at index `r - i - 1`.
#[inline]
pub fn source(k: usize, image: usize, i: usize) -> (usize, usize) {
    if image < k {
        let j = (i + image) % k;
        (j, j)
    } else {
        let r = image - k;
        ((r + k - i) % k, (r + 2 * k - i - 1) % k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reflection_keeps_faces_on_their_edges() {
        for k in [5, 6] {
            for image in 0..2 * k {
                for i in 0..k {
                    let (a, _) = source(k, image, i);
                    let (b, _) = source(k, image, (i + 1) % k);
                    let (_, f) = source(k, image, i);
                    // face f of the original sits between original vertices f and f+1
                    let edge = [f, (f + 1) % k];
                    assert!(edge.contains(&a) && edge.contains(&b), "k={k} image={image} i={i}");
                }
            }
        }
    }

    #[test]
    fn images_are_permutations() {
        for k in [5, 6] {
            for image in 0..2 * k {
                let mut seen_v = vec![false; k];
                let mut seen_f = vec![false; k];
                for i in 0..k {
                    let (v, f) = source(k, image, i);
                    seen_v[v] = true;
                    seen_f[f] = true;
                }
                assert!(seen_v.iter().all(|&b| b) && seen_f.iter().all(|&b| b));
            }
        }
    }
}
