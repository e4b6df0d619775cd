package coll;

public abstract class AbstractCollection {
    public boolean add(Object o) { return true; }
    public int size() { return 0; }
}
