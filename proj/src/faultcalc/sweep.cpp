#include <map>

#include "internal.hpp"
#include "protcoord/faultcalc.hpp"

namespace protcoord {

std::vector<FaultResult> sweep_faults_serial(const PuNetwork& pu, std::span<const FaultJob> jobs) {
    std::vector<FaultResult> out;
    out.reserve(jobs.size());
    for (const auto& job : jobs) out.push_back(solve_fault(pu, job.fault, job.ufcl_ohms));
    return out;
}

std::vector<FaultResult> sweep_faults(const PuNetwork& pu, std::span<const FaultJob> jobs) {
    std::vector<FaultResult> out(jobs.size());

    // One factorisation per distinct UFCL state, built up front so the
    // parallel loop only reads shared data.
    std::map<double, std::size_t> state_of;
    std::vector<LuFactor> factors;
    std::vector<std::vector<Complex>> prefault;
    std::vector<std::size_t> job_state(jobs.size());
    for (std::size_t j = 0; j < jobs.size(); ++j) {
        const double r = jobs[j].ufcl_ohms;
        auto [it, fresh] = state_of.try_emplace(r, factors.size());
        if (fresh) {
            factors.emplace_back(build_ybus(pu, r));
            prefault.push_back(factors.back().solve(source_injections(pu)));
        }
        job_state[j] = it->second;
    }

    // Exceptions may not cross the OpenMP region boundary; keep the first.
    std::exception_ptr failure;
    const auto n = static_cast<std::ptrdiff_t>(jobs.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t j = 0; j < n; ++j) {
        try {
            const std::size_t s = job_state[j];
            out[j] = detail::solve_factored(pu, factors[s], prefault[s], jobs[j].fault, jobs[j].ufcl_ohms);
        } catch (...) {
#pragma omp critical(sweep_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

}  // namespace protcoord
