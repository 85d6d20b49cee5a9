package org.example.p4;

import java.util.*;
import java.io.IOException;

/**
 * File level doc with a } brace.
 */
public class Gen81<T> {
    static synchronized void open2(long p0, int p1, int p2) {

    }
}
