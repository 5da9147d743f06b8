#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>

namespace dynmedian {

/// Compensated (Kahan) accumulator. Used wherever many cost terms are summed
/// so that totals do not drift with the order of accumulation.
class KahanSum {
public:
    void add(double x) {
        double y = x - comp_;
        double t = sum_ + y;
        comp_ = (t - sum_) - y;
        sum_ = t;
    }
    double value() const { return sum_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Mixes a base seed with a stream index. Every parallel work item draws from
/// its own generator seeded this way, so results do not depend on the number
/// of worker threads.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Runs fn(i) for i in [begin, end) split over `threads` workers. fn must only
/// write to slots owned by index i.
void parallel_for(std::size_t begin, std::size_t end, int threads,
                  const std::function<void(std::size_t)>& fn);

/// Shortest decimal rendering that parses back to the same double.
std::string format_double(double v);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace dynmedian
