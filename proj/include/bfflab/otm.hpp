#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bfflab/errors.hpp"
#include "bfflab/nat.hpp"
#include "bfflab/oracle.hpp"
#include "bfflab/sop.hpp"

namespace bfflab {

enum class TapeKind { Input, Work, Output, OracleIn, OracleOut };

struct TapeSpec {
  TapeKind kind = TapeKind::Work;
  std::size_t oracle = 0;  // OracleIn, OracleOut
};

/// Symbol read or written by a transition. '*' matches any symbol when
/// reading and leaves the cell unchanged when writing.
inline constexpr char kBlank = '_';
inline constexpr char kAny = '*';

enum class Move { Left, Right, Stay };

struct Transition {
  std::size_t state = 0;
  std::string reads;   // one symbol per tape
  std::string writes;  // one symbol per tape
  std::vector<Move> moves;
  std::size_t next = 0;
  int line = 0;
};

struct QueryState {
  std::size_t oracle = 0;
  std::size_t resume = 0;
};

/// Multi-tape deterministic oracle Turing machine. Tapes are infinite to
/// the right; moving left on cell 0 stays.
struct Machine {
  std::vector<std::string> states;
  std::vector<TapeSpec> tapes;
  std::size_t initial = 0;
  std::vector<bool> halting;
  std::map<std::size_t, QueryState> queries;
  std::vector<Transition> delta;
  std::size_t oracles = 0;
  std::size_t inputs = 1;

  /// Tape index of the first tape of a kind (and oracle), if any.
  std::optional<std::size_t> tape(TapeKind kind, std::size_t oracle = 0) const;
  /// The transition applying in `state` to the symbols under the heads.
  const Transition* find(std::size_t state, std::string_view symbols) const;

  std::vector<std::vector<std::size_t>> by_state;
};

/// All well-formedness errors of a machine file, each with its line.
class MachineError : public Error {
 public:
  explicit MachineError(std::vector<std::string> errors);
  const std::vector<std::string>& errors() const noexcept { return errors_; }

 private:
  std::vector<std::string> errors_;
};

/// Machine file format; see README for the grammar.
Machine parse_machine(std::string_view text);
Machine load_machine(const std::string& path);

struct Tape {
  std::string cells;
  std::size_t head = 0;

  char read() const { return head < cells.size() ? cells[head] : kBlank; }
  void write(char c);
  /// Number of non-blank cells.
  std::size_t used() const;
};

struct QueryRecord {
  std::size_t oracle = 0;
  Nat x;
  Nat answer;
  bool malformed = false;
};

struct Configuration {
  std::size_t state = 0;
  std::vector<Tape> tapes;
  std::uint64_t steps = 0;        // unit cost
  std::uint64_t length_cost = 0;  // oracle queries cost |f(x)|
  std::uint64_t queries = 0;
  std::uint64_t answer_bits = 0;  // sum of |f(x)|
  std::vector<std::size_t> max_oracle_input;
  std::vector<QueryRecord> query_log;
  std::uint64_t malformed_inputs = 0;
  bool halted = false;
  bool rejected = false;  // halted for lack of a transition
};

/// Binary, most significant bit first, no leading zeros; 0 is empty.
std::string to_binary(const Nat& x);
/// Reads a numeral from cell 0 up to the last non-blank cell; nullopt if
/// a cell inside is not 0 or 1.
std::optional<Nat> read_numeral(const std::string& cells);

/// Inputs separated by '#' on the input tape.
Configuration initial_configuration(const Machine& m, std::span<const Nat> inputs);

/// One step. In a query state the step is the query: the oracle input tape
/// is read as a numeral (malformed content reads as 0 and is flagged), the
/// answer is written to the oracle output tape (0 as "0"), the input tape is
/// erased, both heads return to cell 0, and the unit cost grows by 1 and the
/// length cost by |f(x)|. With no transition the machine halts rejecting.
void step(const Machine& m, Configuration& c, std::span<Oracle> oracles,
          bool strict_oracle_input = false);

struct RunResult {
  Nat output;
  std::uint64_t t_unit = 0;
  std::uint64_t t_len = 0;
  std::uint64_t queries = 0;
  std::uint64_t answer_bits = 0;
  std::vector<std::size_t> peak_lengths;  // per tape
  std::uint64_t malformed_inputs = 0;
  bool rejected = false;
  std::vector<QueryRecord> query_log;
};

/// Called after every step with the configuration reached.
using StepMonitor = std::function<void(const Configuration&, bool was_query)>;

/// Runs to halting; throws FuelExhausted after `fuel` steps.
RunResult run(const Machine& m, std::span<Oracle> oracles, std::span<const Nat> inputs,
              std::uint64_t fuel = 1u << 24, const StepMonitor& monitor = {});

struct OtmSample {
  std::vector<Oracle> oracles;
  std::vector<Nat> inputs;
};

struct OtmViolation {
  std::size_t sample = 0;
  std::string kind;  // time, work-tape, oracle-input, oracle-output, protocol
  std::uint64_t step = 0;
  std::string detail;
};

struct TimeBoundReport {
  std::size_t checked = 0;
  std::size_t skipped = 0;
  std::uint64_t max_t_unit = 0;
  std::vector<OtmViolation> violations;
};

/// For each sample: T_unit <= P(|f|, |x|), and at every step t the work and
/// oracle input tapes hold at most t + (input length) non-blank cells, the
/// oracle output tape at most max(1, |f|(longest oracle input so far))
/// cells, and after each query the oracle input tape is empty with both
/// oracle heads on cell 0.
TimeBoundReport check_time_bound(const Machine& m, const SopPtr& p,
                                 std::span<const OtmSample> samples,
                                 NormMethod method = NormMethod::Table,
                                 std::uint64_t fuel = 1u << 24);

}  // namespace bfflab
