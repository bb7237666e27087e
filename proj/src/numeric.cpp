#include "dlab/numeric.hpp"

namespace dlab {

std::vector<u64> primes_upto(u64 n) {
    std::vector<u64> primes;
    if (n < 2) return primes;
    std::vector<char> mark(n + 1, 1);
    mark[0] = mark[1] = 0;
    for (u64 i = 2; i * i <= n; i++)
        if (mark[i])
            for (u64 j = i * i; j <= n; j += i) mark[j] = 0;
    for (u64 i = 2; i <= n; i++)
        if (mark[i]) primes.push_back(i);
    return primes;
}

}  // namespace dlab
