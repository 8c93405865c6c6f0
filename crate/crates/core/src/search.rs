//! Node budgets and tri-state search results.

/// Default node ceiling for exhaustive searches.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome<T> {
    Found(T),
    Absent,
    BudgetExceeded,
}

impl<T> Outcome<T> {
    pub fn is_found(&self) -> bool {
        matches!(self, Outcome::Found(_))
    }

    pub fn found(self) -> Option<T> {
        match self {
            Outcome::Found(t) => Some(t),
            _ => None,
        }
    }

    pub fn as_ref(&self) -> Outcome<&T> {
        match self {
            Outcome::Found(t) => Outcome::Found(t),
            Outcome::Absent => Outcome::Absent,
            Outcome::BudgetExceeded => Outcome::BudgetExceeded,
        }
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Outcome<U> {
        match self {
            Outcome::Found(t) => Outcome::Found(f(t)),
            Outcome::Absent => Outcome::Absent,
            Outcome::BudgetExceeded => Outcome::BudgetExceeded,
        }
    }

    /// `Some(true)` if found, `Some(false)` if absent, `None` if the budget
    /// ran out.
    pub fn decided(&self) -> Option<bool> {
        match self {
            Outcome::Found(_) => Some(true),
            Outcome::Absent => Some(false),
            Outcome::BudgetExceeded => None,
        }
    }
}

/// Counts search nodes against a ceiling.
#[derive(Clone, Debug)]
pub struct Budget {
    limit: u64,
    used: u64,
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget { limit, used: 0 }
    }

    /// Charges one node; false once the ceiling is passed.
    #[inline]
    pub fn tick(&mut self) -> bool {
        self.used += 1;
        self.used <= self.limit
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn exhausted(&self) -> bool {
        self.used > self.limit
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(DEFAULT_BUDGET)
    }
}
