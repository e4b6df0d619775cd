package java.util;

public class Vector<E> extends AbstractList<E>
        implements List<E>, RandomAccess, java.lang.Cloneable, java.io.Serializable {
    protected int elementCount;

    public synchronized int size() {
        return elementCount;
    }

    public synchronized E get(int index) {
        return null;
    }

    public synchronized void copyInto(Vector<E> target, ArrayList<E> scratch) {
        int n = target.size();
        scratch.addAll(scratch);
    }
}
