#ifndef TERAHAC_CHECK_H_
#define TERAHAC_CHECK_H_

#include <cstdio>
#include <cstdlib>

// Aborts on violated internal preconditions. Data errors are reported through
// absl::Status instead.
#define TERAHAC_CHECK(condition)                                       \
  do {                                                                 \
    if (!(condition)) {                                                \
      std::fprintf(stderr, "%s:%d: check failed: %s\n", __FILE__,      \
                   __LINE__, #condition);                              \
      std::abort();                                                    \
    }                                                                  \
  } while (false)

#define TERAHAC_RETURN_IF_ERROR(expr)      \
  do {                                     \
    absl::Status _status = (expr);         \
    if (!_status.ok()) return _status;     \
  } while (false)

#define TERAHAC_CONCAT_INNER(a, b) a##b
#define TERAHAC_CONCAT(a, b) TERAHAC_CONCAT_INNER(a, b)

#define TERAHAC_ASSIGN_OR_RETURN_IMPL(tmp, lhs, expr) \
  auto tmp = (expr);                                  \
  if (!tmp.ok()) return tmp.status();                 \
  lhs = std::move(tmp).value()

#define TERAHAC_ASSIGN_OR_RETURN(lhs, expr) \
  TERAHAC_ASSIGN_OR_RETURN_IMPL(            \
      TERAHAC_CONCAT(_statusor_, __LINE__), lhs, expr)

#endif  // TERAHAC_CHECK_H_
