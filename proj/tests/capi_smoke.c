#include <stdio.h>
#include <string.h>

#include "curvature/curvature.h"

int main(void) {
  curv_tensor* t = NULL;
  if (curv_tensor_generate("{\"kind\":\"su3_so3\"}", &t) != CURV_OK) return 1;
  curv_options o;
  curv_options_init(&o);
  o.d1 = 1;
  o.d2 = 4;
  char* trace = NULL;
  int verdict = -1;
  curv_status s = curv_certify(t, &o, &trace, &verdict);
  int ok = s == CURV_OK && verdict == 0 && strstr(trace, "\"failing_hypothesis\":\"block_condition\"") != NULL;
  curv_string_free(trace);
  curv_tensor_free(t);
  if (curv_tensor_parse("{\"dim\":", &t) != CURV_PARSE) ok = 0;
  printf("%s\n", ok ? "ok" : curv_last_error());
  return ok ? 0 : 1;
}
