#include <stdio.h>
#include <string.h>

#include "taulab.h"

#define CHECK(call)                                                     \
    do {                                                                \
        TaulabStatus s_ = (call);                                       \
        if (s_ != TAULAB_STATUS_OK) {                                   \
            fprintf(stderr, "%s -> %d: %s\n", #call, (int)s_,           \
                    taulab_last_error() ? taulab_last_error() : "?");   \
            return 1;                                                   \
        }                                                               \
    } while (0)

int main(void) {
    TaulabInstance *tau = NULL;
    CHECK(taulab_construct(8, 42, 0, &tau));

    uint32_t n = 0;
    CHECK(taulab_instance_n(tau, &n));

    uint64_t y = 0;
    CHECK(taulab_evaluate_u64(tau, 42, &y));

    char *text = NULL;
    CHECK(taulab_serialize(tau, &text));
    TaulabInstance *back = NULL;
    CHECK(taulab_deserialize(text, &back));

    char *hex = NULL;
    CHECK(taulab_evaluate_str(back, "0x2a", &hex));

    uint64_t count = 0;
    CHECK(taulab_preimage_count(back, y, &count));

    TaulabInstance *bad = NULL;
    TaulabStatus s = taulab_construct(5, 1, 0, &bad);
    if (s != TAULAB_STATUS_INVALID_ARGUMENT || strstr(taulab_last_error(), "power of two") == NULL) {
        fprintf(stderr, "expected a power-of-two error\n");
        return 1;
    }

    printf("n=%u y=0x%02llx hex=%s preimages=%llu version=%s\n", n, (unsigned long long)y, hex,
           (unsigned long long)count, taulab_version());

    taulab_string_free(hex);
    taulab_string_free(text);
    taulab_instance_free(back);
    taulab_instance_free(tau);
    return 0;
}
