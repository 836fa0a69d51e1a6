use super::{LabelGrid, Mask};

/// Connected components of the nonzero part of a sign field.
///
/// Two nodes are connected when they are 4-neighbours inside `mask` with the
/// same nonzero sign. Components are numbered in scan order of their first
/// node; nodes outside the mask or with sign 0 get label −1.
pub fn components(sign: &[i8], mask: &Mask) -> (usize, LabelGrid) {
    let spec = mask.spec;
    assert_eq!(sign.len(), spec.len(), "sign field does not match the grid");
    let mut labels = vec![-1i32; spec.len()];
    let mut count = 0usize;
    let mut stack = Vec::new();
    for start in 0..spec.len() {
        if !mask.get(start) || sign[start] == 0 || labels[start] >= 0 {
            continue;
        }
        let label = count as i32;
        count += 1;
        labels[start] = label;
        stack.push(start);
        while let Some(p) = stack.pop() {
            for q in spec.neighbors(p) {
                if labels[q] < 0 && mask.get(q) && sign[q] == sign[p] {
                    labels[q] = label;
                    stack.push(q);
                }
            }
        }
    }
    (count, LabelGrid::from_raw(spec, count, labels))
}

/// Connected components of a mask itself.
pub fn components_in(mask: &Mask) -> (usize, LabelGrid) {
    let sign = vec![1i8; mask.spec.len()];
    components(&sign, mask)
}
