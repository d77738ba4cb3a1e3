//! Doc-tested book chapters are registered here once the guide exists.
