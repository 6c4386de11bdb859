//! Reference forms used in examples, tests and the CLI.

use crate::forms::SpecialForm;

/// The Cayley 3-form on `R^7`,
/// `e123 + e145 + e167 + e246 - e257 - e347 - e356`.
///
/// Its support consists of the seven lines of a Fano plane on `{1, …, 7}`.
pub fn cayley_form() -> SpecialForm {
    SpecialForm::from_terms(
        7,
        3,
        &[
            (&[1, 2, 3], 1),
            (&[1, 4, 5], 1),
            (&[1, 6, 7], 1),
            (&[2, 4, 6], 1),
            (&[2, 5, 7], -1),
            (&[3, 4, 7], -1),
            (&[3, 5, 6], -1),
        ],
    )
    .expect("valid literal")
}

/// `e12 + e34` on `R^4`.
pub fn kahler_form() -> SpecialForm {
    SpecialForm::from_terms(4, 2, &[(&[1, 2], 1), (&[3, 4], 1)]).expect("valid literal")
}
