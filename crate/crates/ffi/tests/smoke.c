#include <stdio.h>
#include <string.h>

#include "patience_ffi.h"

int main(void) {
    PtcSequence *alpha = NULL, *beta = NULL;
    if (ptc_sequence_parse("{\"T\":3,\"values\":[\"1/2\",\"12/25\",\"91/250\"]}", &alpha) != PTC_OK)
        return 10;
    const char *vals[] = {"1", "2/3", "1/2"};
    if (ptc_sequence_from_strings(vals, 3, &beta) != PTC_OK)
        return 11;

    char *json = NULL;
    PtcStatus s = ptc_is_more_patient(alpha, beta, &json);
    printf("patient=%d\n", (int)s);
    printf("%s\n", json);
    ptc_string_free(json);

    json = NULL;
    s = ptc_patience_counterexample(alpha, beta, &json);
    printf("counterexample=%d\n", (int)s);
    ptc_string_free(json);

    PtcSequence *bad = NULL;
    s = ptc_sequence_parse("{\"T\":1,\"values\":[\"1/0\"]}", &bad);
    printf("bad=%d error=%s\n", (int)s, ptc_last_error());

    ptc_sequence_free(alpha);
    ptc_sequence_free(beta);
    return 0;
}
