#include "config.h"
#include <stdio.h>
#include <stdint.h>
#include <stdlib.h>
#include <string.h>
#include <stdbool.h>
#include "spandsp/telephony.h"
#include "spandsp/alloc.h"
#include "spandsp/bit_operations.h"
#include "spandsp/bitstream.h"
#include "spandsp/g711.h"
#include "spandsp/g726.h"
/* usage: g726_oracle enc|dec
   enc: s16le on stdin -> G.726-32 codes, two per byte, first in the low nibble
   dec: packed codes on stdin -> s16le */
int main(int argc, char** argv){
  static uint8_t in[1<<24]; size_t n = fread(in,1,sizeof in,stdin);
  g726_state_t* s = g726_init(NULL, 32000, G726_ENCODING_LINEAR, G726_PACKING_NONE);
  if (!strcmp(argv[1],"enc")) {
    int ns = n/2; uint8_t* codes = malloc(ns);
    g726_encode(s, codes, (int16_t*)in, ns);
    for (int i=0;i+1<ns;i+=2){ uint8_t b = (codes[i]&15) | ((codes[i+1]&15)<<4); fwrite(&b,1,1,stdout);}  
  } else {
    int ns = n*2; uint8_t* codes = malloc(ns); int16_t* out = malloc(ns*2);
    for (size_t i=0;i<n;i++){codes[2*i]=in[i]&15; codes[2*i+1]=in[i]>>4;}
    g726_decode(s, out, codes, ns);
    fwrite(out,2,ns,stdout);
  }
  return 0;
}
